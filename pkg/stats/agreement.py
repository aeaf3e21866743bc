"""
Acuerdo entre lectores (kappa de Cohen) y prueba chi-cuadrado de Pearson sobre tablas 2x2.
"""

import logging
from typing import Sequence

import numpy as np
from scipy.stats import chi2_contingency

from models import ChiSquareResult, InvalidInputError, KappaResult
from stats.exceptions import DegenerateMarginalsError


logger = logging.getLogger(__name__)


def as_count_table(table: Sequence[Sequence[float]], operation: str, square: bool = True) -> np.ndarray:
    """Valida una tabla de conteos no negativos con total positivo."""
    counts = np.asarray(table, dtype=np.float64)
    if counts.ndim != 2 or counts.shape[0] < 2 or counts.shape[1] < 2:
        raise InvalidInputError(operation, f"se esperaba una tabla de al menos 2x2, recibido {counts.shape}")
    if square and counts.shape[0] != counts.shape[1]:
        raise InvalidInputError(operation, f"la tabla de acuerdo debe ser cuadrada, recibido {counts.shape}")
    if not np.all(np.isfinite(counts)) or np.any(counts < 0):
        raise InvalidInputError(operation, "los conteos deben ser finitos y no negativos")
    if counts.sum() <= 0:
        raise InvalidInputError(operation, "la tabla está vacía")
    return counts


def cohen_kappa(table: Sequence[Sequence[float]]) -> KappaResult:
    """kappa = (p_o − p_e) / (1 − p_e), con p_e a partir de los productos de los marginales."""
    counts = as_count_table(table, "cohen_kappa")
    total = counts.sum()
    p_observed = float(np.trace(counts) / total)
    p_expected = float(np.sum(counts.sum(axis=1) * counts.sum(axis=0)) / total ** 2)
    if p_expected == 1.0:
        raise DegenerateMarginalsError(p_expected)
    kappa = (p_observed - p_expected) / (1.0 - p_expected)
    return KappaResult(kappa=kappa, p_observed=p_observed, p_expected=p_expected, n=int(total))


def chi_square_2x2(table: Sequence[Sequence[float]]) -> ChiSquareResult:
    """Estadístico de Pearson sin corrección de Yates, con 1 grado de libertad."""
    counts = as_count_table(table, "chi_square_2x2", square=True)
    if counts.shape != (2, 2):
        raise InvalidInputError("chi_square_2x2", f"se esperaba una tabla 2x2, recibido {counts.shape}")
    if np.any(counts.sum(axis=0) == 0) or np.any(counts.sum(axis=1) == 0):
        raise InvalidInputError("chi_square_2x2", "la tabla tiene un marginal nulo")

    statistic, p_value, dof, _ = chi2_contingency(counts, correction=False)
    return ChiSquareResult(statistic=float(statistic), p_value=float(p_value), dof=int(dof), n=int(counts.sum()))
