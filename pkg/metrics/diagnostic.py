"""
Tabla de confusión, métricas diagnósticas puntuales y valores predictivos ajustados por prevalencia.
La clase positiva es la inflamación activa y se predice positivo cuando probabilidad >= umbral.
"""

import logging
from typing import Optional, Sequence, Tuple

import numpy as np
from sklearn.metrics import confusion_matrix

from models import (
    ConfusionTable,
    CurveKind,
    CurvePoint,
    CurveSeries,
    DiagnosticMetrics,
    InvalidInputError,
)


logger = logging.getLogger(__name__)

DEFAULT_PREVALENCE_RANGE = (0.0005, 0.05)
DEFAULT_PREVALENCE_POINTS = 100


def validate_scores(probs: Sequence[float], labels: Sequence[int], operation: str) -> Tuple[np.ndarray, np.ndarray]:
    """Convierte y valida un par (probabilidades, etiquetas)."""
    probs = np.asarray(probs, dtype=np.float64)
    labels = np.asarray(labels)
    if probs.ndim != 1 or labels.ndim != 1:
        raise InvalidInputError(operation, "probabilidades y etiquetas deben ser vectores")
    if probs.size == 0:
        raise InvalidInputError(operation, "entrada vacía")
    if probs.shape != labels.shape:
        raise InvalidInputError(operation, f"longitudes distintas: {probs.size} probabilidades y {labels.size} etiquetas")
    if not np.all(np.isin(labels, (0, 1))):
        raise InvalidInputError(operation, "las etiquetas deben ser 0 o 1")
    if not np.all(np.isfinite(probs)) or probs.min() < 0.0 or probs.max() > 1.0:
        raise InvalidInputError(operation, "las probabilidades deben ser finitas y estar en [0, 1]")
    return probs, labels.astype(np.int64)


def require_both_classes(labels: np.ndarray, operation: str) -> None:
    if np.unique(labels).size < 2:
        raise InvalidInputError(operation, "se requieren casos de ambas clases")


def confusion(probs: Sequence[float], labels: Sequence[int], threshold: float = 0.5) -> ConfusionTable:
    """Tabla de confusión con positivo si probabilidad >= umbral."""
    probs, labels = validate_scores(probs, labels, "confusion")
    predicted = (probs >= threshold).astype(np.int64)
    tn, fp, fn, tp = confusion_matrix(labels, predicted, labels=[0, 1]).ravel()
    return ConfusionTable(tp=int(tp), fp=int(fp), tn=int(tn), fn=int(fn))


def _ratio(numerator: float, denominator: float) -> Optional[float]:
    if denominator == 0:
        return None
    return float(numerator / denominator)


def basic_metrics(table: ConfusionTable) -> DiagnosticMetrics:
    """
    Métricas estándar. Un denominador cero deja la métrica indefinida (None), nunca 0 ni 1.
    """
    tp, fp, tn, fn = table.tp, table.fp, table.tn, table.fn
    sensitivity = _ratio(tp, tp + fn)
    ppv = _ratio(tp, tp + fp)

    f1 = None
    if sensitivity is not None and ppv is not None and ppv + sensitivity > 0:
        f1 = 2.0 * ppv * sensitivity / (ppv + sensitivity)

    return DiagnosticMetrics(
        accuracy=_ratio(tp + tn, table.total),
        sensitivity=sensitivity,
        specificity=_ratio(tn, tn + fp),
        ppv=ppv,
        npv=_ratio(tn, tn + fn),
        precision=ppv,
        recall=sensitivity,
        f1=f1,
    )


def _check_unit(value: float, name: str) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise InvalidInputError("prevalence_adjusted", f"'{name}' debe estar en [0, 1], recibido {value}")
    return value


def prevalence_adjusted(sensitivity: float, specificity: float, prevalence: float) -> Tuple[Optional[float], Optional[float]]:
    """Valores predictivos (ppv, npv) por el teorema de Bayes para una prevalencia dada."""
    sens = _check_unit(sensitivity, "sensitivity")
    spec = _check_unit(specificity, "specificity")
    p = _check_unit(prevalence, "prevalence")

    true_pos = sens * p
    true_neg = spec * (1.0 - p)
    ppv = _ratio(true_pos, true_pos + (1.0 - spec) * (1.0 - p))
    npv = _ratio(true_neg, true_neg + (1.0 - sens) * p)
    return ppv, npv


def prevalence_curve(
        sensitivity: float,
        specificity: float,
        prevalence_range: Tuple[float, float] = DEFAULT_PREVALENCE_RANGE,
        points: int = DEFAULT_PREVALENCE_POINTS,
) -> CurveSeries:
    """Serie ppv/npv frente a prevalencia en una rejilla lineal."""
    lo, hi = prevalence_range
    if not 0.0 < lo < hi < 1.0 or points < 2:
        raise InvalidInputError("prevalence_curve", f"rango de prevalencia inválido: {prevalence_range} con {points} puntos")
    grid = np.linspace(lo, hi, points)
    curve = []
    for p in grid:
        ppv, npv = prevalence_adjusted(sensitivity, specificity, p)
        curve.append(CurvePoint(x=float(p), y=ppv, y2=npv))
    return CurveSeries(kind=CurveKind.PPV_NPV_VS_PREVALENCE, points=curve)
