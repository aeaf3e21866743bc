"""
Prueba de rangos con signo de Wilcoxon para muestras pareadas.

Las diferencias nulas se descartan. Hasta EXACT_MAX_N diferencias el p-valor se obtiene por
enumeración exacta de las 2^n asignaciones de signo (programación dinámica sobre rangos
duplicados, que son enteros incluso con empates); por encima se usa la aproximación normal
con corrección por empates y por continuidad.
"""

import logging
from typing import Tuple

import numpy as np
from scipy.stats import norm, rankdata

from models import Alternative, PairedSample, PValueMethod, WilcoxonResult
from stats.exceptions import DegenerateSampleError


logger = logging.getLogger(__name__)

EXACT_MAX_N = 20


def signed_ranks(sample: PairedSample) -> Tuple[np.ndarray, np.ndarray, int]:
    """(rangos de |d|, signos, número de ceros descartados) con d = a − b."""
    diff = np.asarray(sample.a, dtype=np.float64) - np.asarray(sample.b, dtype=np.float64)
    nonzero = diff[diff != 0]
    dropped = int(diff.size - nonzero.size)
    if nonzero.size == 0:
        raise DegenerateSampleError("wilcoxon_signed_rank", "todas las diferencias son cero")
    return rankdata(np.abs(nonzero)), np.sign(nonzero), dropped


def exact_counts(ranks: np.ndarray) -> np.ndarray:
    """
    counts[s] = número de asignaciones de signo cuya suma de rangos positivos duplicada vale s.
    """
    doubled = np.rint(2 * ranks).astype(np.int64)
    counts = np.zeros(int(doubled.sum()) + 1, dtype=np.int64)
    counts[0] = 1
    for r in doubled:
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[:counts.size - r]
        counts = counts + shifted
    return counts


def _exact_p(ranks: np.ndarray, w: float, alternative: Alternative) -> float:
    counts = exact_counts(ranks)
    total = 2 ** ranks.size
    w2 = int(round(2 * w))
    p_greater = int(counts[w2:].sum()) / total
    p_less = int(counts[:w2 + 1].sum()) / total
    if alternative == Alternative.GREATER:
        return p_greater
    if alternative == Alternative.LESS:
        return p_less
    return min(1.0, 2 * min(p_greater, p_less))


def _normal_p(ranks: np.ndarray, w: float, alternative: Alternative) -> float:
    n = ranks.size
    mean = n * (n + 1) / 4.0
    _, tie_counts = np.unique(ranks, return_counts=True)
    var = n * (n + 1) * (2 * n + 1) / 24.0 - float(np.sum(tie_counts ** 3 - tie_counts)) / 48.0
    if var <= 0:
        raise DegenerateSampleError("wilcoxon_signed_rank", "varianza nula del estadístico")
    sd = np.sqrt(var)
    if alternative == Alternative.GREATER:
        return float(norm.sf((w - mean - 0.5) / sd))
    if alternative == Alternative.LESS:
        return float(norm.cdf((w - mean + 0.5) / sd))
    z = (abs(w - mean) - 0.5) / sd
    return float(min(1.0, 2 * norm.sf(z)))


def wilcoxon_signed_rank(sample: PairedSample, alternative: Alternative = Alternative.TWO_SIDED) -> WilcoxonResult:
    """W = suma de los rangos de las diferencias positivas (a > b)."""
    ranks, signs, dropped = signed_ranks(sample)
    w = float(ranks[signs > 0].sum())
    n = int(ranks.size)

    if n <= EXACT_MAX_N:
        method = PValueMethod.EXACT
        p_value = _exact_p(ranks, w, alternative)
    else:
        method = PValueMethod.APPROXIMATE
        p_value = _normal_p(ranks, w, alternative)

    logger.debug(f"Wilcoxon: W={w}, n={n}, p={p_value} ({method.value}, {alternative.value}).")
    return WilcoxonResult(
        statistic=w,
        p_value=p_value,
        n=n,
        n_zero_dropped=dropped,
        method=method,
        alternative=alternative,
    )
