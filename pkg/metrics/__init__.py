"""
Metrics package: confusión, métricas diagnósticas, curvas, intervalos bootstrap e informes de evaluación.
"""

from metrics.diagnostic import (
    DEFAULT_PREVALENCE_POINTS,
    DEFAULT_PREVALENCE_RANGE,
    basic_metrics,
    confusion,
    prevalence_adjusted,
    prevalence_curve,
)
from metrics.curves import (
    default_grid,
    precision_recall,
    probability_histogram,
    roc_auc,
    threshold_sweep,
)
from metrics.bootstrap import DEFAULT_RESAMPLES, bootstrap_ci, bootstrap_metric_ci
from metrics.report import CURVE_COLUMNS, UNDEFINED, evaluate, write_curve_csv, write_eval_report

__all__ = [
    # Diagnostic metrics
    "DEFAULT_PREVALENCE_POINTS",
    "DEFAULT_PREVALENCE_RANGE",
    "basic_metrics",
    "confusion",
    "prevalence_adjusted",
    "prevalence_curve",
    # Curves
    "default_grid",
    "precision_recall",
    "probability_histogram",
    "roc_auc",
    "threshold_sweep",
    # Bootstrap
    "DEFAULT_RESAMPLES",
    "bootstrap_ci",
    "bootstrap_metric_ci",
    # Reports
    "CURVE_COLUMNS",
    "UNDEFINED",
    "evaluate",
    "write_curve_csv",
    "write_eval_report",
]
