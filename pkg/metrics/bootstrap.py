"""
Intervalos de confianza al 95 % por bootstrap de percentiles.
"""

import logging
from typing import Callable, Sequence

import numpy as np

from metrics.diagnostic import require_both_classes, validate_scores
from models import ConfidenceInterval, InvalidInputError


logger = logging.getLogger(__name__)

DEFAULT_RESAMPLES = 2000
PERCENTILES = (2.5, 97.5)


def bootstrap_ci(values: Sequence[float], resamples: int = DEFAULT_RESAMPLES, seed: int = 0) -> ConfidenceInterval:
    """Intervalo de la media de `values` (p. ej. AUC por fold). Determinista dada la semilla."""
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 1 or values.size < 2:
        raise InvalidInputError("bootstrap_ci", "se requieren al menos 2 valores")
    if not np.all(np.isfinite(values)):
        raise InvalidInputError("bootstrap_ci", "los valores deben ser finitos")
    if resamples < 1:
        raise InvalidInputError("bootstrap_ci", "se requiere al menos un remuestreo")

    rng = np.random.default_rng(np.random.SeedSequence(seed))
    idx = rng.integers(0, values.size, size=(resamples, values.size))
    means = values[idx].mean(axis=1)
    lo, hi = np.percentile(means, PERCENTILES)
    return ConfidenceInterval(
        mean=float(values.mean()),
        lo=float(lo),
        hi=float(hi),
        n=int(values.size),
        resamples=resamples,
    )


def bootstrap_metric_ci(
        probs: Sequence[float],
        labels: Sequence[int],
        metric: Callable[[np.ndarray, np.ndarray], float],
        resamples: int = DEFAULT_RESAMPLES,
        seed: int = 0,
) -> ConfidenceInterval:
    """
    Intervalo de una métrica calculada sobre casos remuestreados con reemplazo. Los remuestreos
    con una sola clase no definen la métrica y se descartan.
    """
    probs, labels = validate_scores(probs, labels, "bootstrap_ci")
    if probs.size < 2:
        raise InvalidInputError("bootstrap_ci", "se requieren al menos 2 casos")
    require_both_classes(labels, "bootstrap_ci")

    rng = np.random.default_rng(np.random.SeedSequence(seed))
    estimates = []
    skipped = 0
    for _ in range(resamples):
        idx = rng.integers(0, probs.size, size=probs.size)
        sample_labels = labels[idx]
        if sample_labels.min() == sample_labels.max():
            skipped += 1
            continue
        estimates.append(metric(probs[idx], sample_labels))

    if skipped:
        logger.warning(f"{skipped} remuestreos bootstrap descartados por contener una sola clase.")
    if not estimates:
        raise InvalidInputError("bootstrap_ci", "ningún remuestreo contiene ambas clases")

    lo, hi = np.percentile(estimates, PERCENTILES)
    return ConfidenceInterval(
        mean=float(metric(probs, labels)),
        lo=float(lo),
        hi=float(hi),
        n=int(probs.size),
        resamples=len(estimates),
        method="percentile bootstrap (cases)",
    )
