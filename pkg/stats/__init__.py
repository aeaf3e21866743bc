"""
Stats package: pruebas de hipótesis y coeficientes de acuerdo.
"""

from stats.exceptions import StatsError, DegenerateSampleError, DegenerateMarginalsError
from stats.wilcoxon import EXACT_MAX_N, exact_counts, signed_ranks, wilcoxon_signed_rank
from stats.agreement import chi_square_2x2, cohen_kappa
from stats.comparison import compare_models, summarize_auc

__all__ = [
    # Exceptions
    "StatsError",
    "DegenerateSampleError",
    "DegenerateMarginalsError",
    # Wilcoxon
    "EXACT_MAX_N",
    "exact_counts",
    "signed_ranks",
    "wilcoxon_signed_rank",
    # Agreement
    "cohen_kappa",
    "chi_square_2x2",
    # Model comparison
    "compare_models",
    "summarize_auc",
]
