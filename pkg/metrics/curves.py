"""
Curvas de evaluación: ROC, precisión-recall, barridos de umbral e histograma de probabilidades.
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
from sklearn.metrics import auc, average_precision_score, precision_recall_curve, roc_curve

from metrics.diagnostic import basic_metrics, confusion, require_both_classes, validate_scores
from models import CurveKind, CurvePoint, CurveSeries, HistogramBin, InvalidInputError


logger = logging.getLogger(__name__)

DEFAULT_GRID_STEP = 0.01


def roc_auc(probs: Sequence[float], labels: Sequence[int]) -> Tuple[float, CurveSeries]:
    """
    AUC por la regla del trapecio sobre todos los umbrales únicos. Los empates producen segmentos
    diagonales, lo que equivale a contar cada par empatado como 1/2.
    """
    probs, labels = validate_scores(probs, labels, "roc_auc")
    require_both_classes(labels, "roc_auc")
    fpr, tpr, _ = roc_curve(labels, probs, drop_intermediate=False)
    area = float(auc(fpr, tpr))
    points = [CurvePoint(x=float(x), y=float(y)) for x, y in zip(fpr, tpr)]
    return area, CurveSeries(kind=CurveKind.ROC, points=points)


def precision_recall(probs: Sequence[float], labels: Sequence[int]) -> Tuple[float, CurveSeries]:
    """Precisión media escalonada y curva PR con recall ascendente."""
    probs, labels = validate_scores(probs, labels, "precision_recall")
    require_both_classes(labels, "precision_recall")
    precision, recall, _ = precision_recall_curve(labels, probs)
    points = [CurvePoint(x=float(r), y=float(p)) for r, p in zip(recall[::-1], precision[::-1])]
    average = float(average_precision_score(labels, probs))
    return average, CurveSeries(kind=CurveKind.PR, points=points)


def default_grid(step: float = DEFAULT_GRID_STEP) -> np.ndarray:
    count = int(round(1.0 / step))
    return np.round(np.arange(count + 1) * step, 10)


def threshold_sweep(
        probs: Sequence[float],
        labels: Sequence[int],
        grid: Optional[Sequence[float]] = None,
) -> Tuple[CurveSeries, CurveSeries]:
    """Sensibilidad/especificidad y F1/recall para cada umbral de la rejilla."""
    grid = default_grid() if grid is None else np.asarray(grid, dtype=np.float64)
    if grid.ndim != 1 or grid.size == 0:
        raise InvalidInputError("threshold_sweep", "la rejilla de umbrales debe ser un vector no vacío")
    if grid.min() < 0.0 or grid.max() > 1.0 or np.any(np.diff(grid) <= 0):
        raise InvalidInputError("threshold_sweep", "la rejilla debe ser estrictamente creciente dentro de [0, 1]")

    sens_spec = []
    f1_recall = []
    for threshold in grid:
        metrics = basic_metrics(confusion(probs, labels, float(threshold)))
        sens_spec.append(CurvePoint(x=float(threshold), y=metrics.sensitivity, y2=metrics.specificity))
        f1_recall.append(CurvePoint(x=float(threshold), y=metrics.f1, y2=metrics.recall))

    return (
        CurveSeries(kind=CurveKind.SENS_SPEC_VS_THRESHOLD, points=sens_spec),
        CurveSeries(kind=CurveKind.F1_RECALL_VS_THRESHOLD, points=f1_recall),
    )


def probability_histogram(probs: Sequence[float], labels: Sequence[int], bins: int = 10) -> List[HistogramBin]:
    """Conteos por clase en `bins` intervalos iguales de [0, 1]; el último incluye 1."""
    probs, labels = validate_scores(probs, labels, "probability_histogram")
    if bins < 1:
        raise InvalidInputError("probability_histogram", "se requiere al menos un intervalo")
    edges = np.linspace(0.0, 1.0, bins + 1)
    healthy, _ = np.histogram(probs[labels == 0], bins=edges)
    inflamed, _ = np.histogram(probs[labels == 1], bins=edges)
    return [
        HistogramBin(lo=float(edges[i]), hi=float(edges[i + 1]), healthy=int(healthy[i]), inflamed=int(inflamed[i]))
        for i in range(bins)
    ]
