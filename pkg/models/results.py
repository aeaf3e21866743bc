"""
Modelos de resultados de evaluación y de pruebas estadísticas.
"""

from typing import Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from models.enums import Alternative, CurveKind, PValueMethod
from models.records import FoldResult


class ConfusionTable(BaseModel):
    """Tabla de contingencia 2x2 con la inflamación activa como clase positiva."""
    model_config = ConfigDict(frozen=True)

    tp: int = Field(..., ge=0)
    fp: int = Field(..., ge=0)
    tn: int = Field(..., ge=0)
    fn: int = Field(..., ge=0)

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    @classmethod
    def from_reader_crosstab(cls, table: Sequence[Sequence[int]]) -> "ConfusionTable":
        """
        Construye la tabla a partir de una tabla cruzada lector x referencia:
        filas = lector negativo / positivo, columnas = referencia negativa / positiva.
        """
        (tn, fn), (fp, tp) = table
        return cls(tp=int(tp), fp=int(fp), tn=int(tn), fn=int(fn))


class DiagnosticMetrics(BaseModel):
    """Métricas puntuales. None indica métrica indefinida (denominador cero)."""
    accuracy: Optional[float] = None
    sensitivity: Optional[float] = None
    specificity: Optional[float] = None
    ppv: Optional[float] = None
    npv: Optional[float] = None
    precision: Optional[float] = None
    recall: Optional[float] = None
    f1: Optional[float] = None


class CurvePoint(BaseModel):
    """Punto de una curva; y2 es la segunda serie cuando la curva tiene dos."""
    x: float
    y: Optional[float] = None
    y2: Optional[float] = None


STRICT_X_KINDS = {
    CurveKind.SENS_SPEC_VS_THRESHOLD,
    CurveKind.F1_RECALL_VS_THRESHOLD,
    CurveKind.PPV_NPV_VS_PREVALENCE,
}


class CurveSeries(BaseModel):
    """Serie ordenada de puntos con todas las coordenadas en [0, 1]."""
    kind: CurveKind
    points: List[CurvePoint]

    @model_validator(mode="after")
    def validate_points(self) -> "CurveSeries":
        xs = [p.x for p in self.points]
        for p in self.points:
            for value in (p.x, p.y, p.y2):
                if value is not None and not 0.0 <= value <= 1.0:
                    raise ValueError(f"Coordenada fuera de [0, 1] en la curva '{self.kind.value}': {value}")
        diffs = np.diff(xs)
        if self.kind in STRICT_X_KINDS and np.any(diffs <= 0):
            raise ValueError(f"La curva '{self.kind.value}' requiere x estrictamente creciente.")
        if np.any(diffs < 0):
            raise ValueError(f"La curva '{self.kind.value}' requiere x no decreciente.")
        return self


class ConfidenceInterval(BaseModel):
    """Intervalo de confianza al 95 %."""
    mean: float
    lo: float
    hi: float
    n: int
    resamples: int
    method: str = "percentile bootstrap"


class HistogramBin(BaseModel):
    """Conteo de casos por clase en un intervalo de probabilidad."""
    lo: float
    hi: float
    healthy: int
    inflamed: int


class EvalReport(BaseModel):
    """Probabilidades por caso más curvas, métricas puntuales e intervalos derivados."""
    case_ids: List[str]
    labels: List[int]
    probabilities: List[float]
    threshold: float
    confusion: ConfusionTable
    metrics: DiagnosticMetrics
    auc: float
    auc_ci: ConfidenceInterval
    average_precision: float
    sample_prevalence: float
    prevalence_adjusted: Dict[str, Optional[float]] = Field(default_factory=dict)
    curves: Dict[str, CurveSeries] = Field(default_factory=dict)
    histogram: List[HistogramBin] = Field(default_factory=list)


class CVReport(BaseModel):
    """Resultado agregado de una validación cruzada."""
    model: str
    members: List[str]
    folds: List[FoldResult]
    fold_auc: List[Optional[float]]
    member_fold_auc: Dict[str, List[Optional[float]]] = Field(default_factory=dict)
    mean_auc: float
    auc_ci: ConfidenceInterval
    threshold: float
    pooled_confusion: ConfusionTable
    pooled_metrics: DiagnosticMetrics


class PairedSample(BaseModel):
    """Muestras pareadas por fold o por caso."""
    model_config = ConfigDict(frozen=True)

    a: List[float]
    b: List[float]

    @model_validator(mode="after")
    def validate_lengths(self) -> "PairedSample":
        if len(self.a) != len(self.b) or len(self.a) < 1:
            raise ValueError("Las muestras pareadas deben tener la misma longitud (>= 1).")
        return self


class WilcoxonResult(BaseModel):
    """Resultado de la prueba de rangos con signo de Wilcoxon."""
    test: str = "wilcoxon_signed_rank"
    statistic: float
    p_value: float
    n: int
    n_zero_dropped: int
    method: PValueMethod
    alternative: Alternative
    zero_handling: str = "drop zeros"


class KappaResult(BaseModel):
    """Coeficiente kappa de Cohen con sus acuerdos observado y esperado."""
    test: str = "cohen_kappa"
    kappa: float
    p_observed: float
    p_expected: float
    n: int


class ChiSquareResult(BaseModel):
    """Prueba chi-cuadrado de Pearson sobre una tabla 2x2."""
    test: str = "chi_square_2x2"
    statistic: float
    p_value: float
    dof: int = 1
    n: int
    method: PValueMethod = PValueMethod.APPROXIMATE


class PairwiseComparison(BaseModel):
    """Prueba de Wilcoxon entre las AUC por fold de dos modelos."""
    model_a: str
    model_b: str
    result: WilcoxonResult
