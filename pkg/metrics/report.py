"""
Ensamblado del informe de evaluación y escritura de curvas y métricas en CSV/JSON.
"""

import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from metrics.bootstrap import DEFAULT_RESAMPLES, bootstrap_metric_ci
from metrics.curves import precision_recall, probability_histogram, roc_auc, threshold_sweep
from metrics.diagnostic import (
    DEFAULT_PREVALENCE_POINTS,
    DEFAULT_PREVALENCE_RANGE,
    basic_metrics,
    confusion,
    prevalence_adjusted,
    prevalence_curve,
    validate_scores,
)
from models import CurveKind, CurveSeries, EvalReport


logger = logging.getLogger(__name__)

REFERENCE_PREVALENCE = 0.01
UNDEFINED = "undefined"

CURVE_COLUMNS: Dict[CurveKind, Tuple[str, ...]] = {
    CurveKind.ROC: ("fpr", "tpr"),
    CurveKind.PR: ("recall", "precision"),
    CurveKind.SENS_SPEC_VS_THRESHOLD: ("threshold", "sensitivity", "specificity"),
    CurveKind.F1_RECALL_VS_THRESHOLD: ("threshold", "f1", "recall"),
    CurveKind.PPV_NPV_VS_PREVALENCE: ("prevalence", "ppv", "npv"),
}


def _auc_metric(probs: np.ndarray, labels: np.ndarray) -> float:
    return roc_auc(probs, labels)[0]


def evaluate(
        probs: Sequence[float],
        labels: Sequence[int],
        threshold: float = 0.5,
        prevalence_range: Tuple[float, float] = DEFAULT_PREVALENCE_RANGE,
        prevalence_points: int = DEFAULT_PREVALENCE_POINTS,
        seed: int = 0,
        resamples: int = DEFAULT_RESAMPLES,
        case_ids: Optional[Sequence[str]] = None,
        reference_prevalence: float = REFERENCE_PREVALENCE,
) -> EvalReport:
    """
    Evaluación completa de un conjunto de probabilidades: confusión, métricas puntuales, AUC con
    intervalo bootstrap por casos, curvas PR y de umbral, valores predictivos y histograma.
    """
    probs, labels = validate_scores(probs, labels, "evaluate")
    auc_value, roc_series = roc_auc(probs, labels)
    average_precision, pr_series = precision_recall(probs, labels)
    sens_spec, f1_recall = threshold_sweep(probs, labels)

    table = confusion(probs, labels, threshold)
    metrics = basic_metrics(table)

    adjusted: Dict[str, Optional[float]] = {"prevalence": reference_prevalence, "ppv": None, "npv": None}
    curves: Dict[str, CurveSeries] = {
        CurveKind.ROC.value: roc_series,
        CurveKind.PR.value: pr_series,
        CurveKind.SENS_SPEC_VS_THRESHOLD.value: sens_spec,
        CurveKind.F1_RECALL_VS_THRESHOLD.value: f1_recall,
    }
    if metrics.sensitivity is not None and metrics.specificity is not None:
        ppv, npv = prevalence_adjusted(metrics.sensitivity, metrics.specificity, reference_prevalence)
        adjusted.update(ppv=ppv, npv=npv)
        curves[CurveKind.PPV_NPV_VS_PREVALENCE.value] = prevalence_curve(
            metrics.sensitivity, metrics.specificity, prevalence_range, prevalence_points
        )
    else:
        logger.warning("Sensibilidad o especificidad indefinidas: se omiten los valores ajustados por prevalencia.")

    ids = list(case_ids) if case_ids is not None else [str(i) for i in range(probs.size)]
    return EvalReport(
        case_ids=ids,
        labels=labels.tolist(),
        probabilities=probs.tolist(),
        threshold=float(threshold),
        confusion=table,
        metrics=metrics,
        auc=auc_value,
        auc_ci=bootstrap_metric_ci(probs, labels, _auc_metric, resamples=resamples, seed=seed),
        average_precision=average_precision,
        sample_prevalence=float(labels.mean()),
        prevalence_adjusted=adjusted,
        curves=curves,
        histogram=probability_histogram(probs, labels),
    )


def curve_frame(series: CurveSeries) -> pd.DataFrame:
    columns = CURVE_COLUMNS[series.kind]
    rows = [(p.x, p.y, p.y2)[:len(columns)] for p in series.points]
    return pd.DataFrame(rows, columns=list(columns))


def write_curve_csv(series: CurveSeries, path: Path) -> Path:
    """Escribe una curva con su cabecera documentada; los valores indefinidos se marcan 'undefined'."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    curve_frame(series).to_csv(path, index=False, na_rep=UNDEFINED, lineterminator="\n")
    return path


def write_eval_report(report: EvalReport, directory: Path) -> List[Path]:
    """
    Escribe eval_report.json, metrics.csv, cases.csv, histogram.csv y un CSV por curva.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written: List[Path] = []

    report_path = directory / "eval_report.json"
    report_path.write_text(report.model_dump_json(indent=2), encoding="utf-8")
    written.append(report_path)

    metric_rows = [("auc", report.auc), ("auc_ci_lo", report.auc_ci.lo), ("auc_ci_hi", report.auc_ci.hi),
                   ("average_precision", report.average_precision), ("threshold", report.threshold),
                   ("sample_prevalence", report.sample_prevalence)]
    metric_rows += list(report.metrics.model_dump().items())
    metric_rows += [(f"adjusted_{key}", value) for key, value in report.prevalence_adjusted.items()]
    metric_rows += list(report.confusion.model_dump().items())
    metrics_path = directory / "metrics.csv"
    pd.DataFrame(metric_rows, columns=["metric", "value"]).to_csv(
        metrics_path, index=False, na_rep=UNDEFINED, lineterminator="\n"
    )
    written.append(metrics_path)

    cases_path = directory / "cases.csv"
    pd.DataFrame({
        "case_id": report.case_ids,
        "label": report.labels,
        "probability": report.probabilities,
    }).to_csv(cases_path, index=False, lineterminator="\n")
    written.append(cases_path)

    histogram_path = directory / "histogram.csv"
    pd.DataFrame([b.model_dump() for b in report.histogram], columns=["lo", "hi", "healthy", "inflamed"]).to_csv(
        histogram_path, index=False, lineterminator="\n"
    )
    written.append(histogram_path)

    for name, series in report.curves.items():
        written.append(write_curve_csv(series, directory / f"{name}.csv"))

    logger.info(f"Informe de evaluación escrito en {directory} ({len(written)} archivos).")
    return written
