import logging
from itertools import combinations
from typing import List, Mapping, Sequence, Tuple

import numpy as np

from models import Alternative, InvalidInputError, PairedSample, PairwiseComparison
from stats.exceptions import DegenerateSampleError
from stats.wilcoxon import wilcoxon_signed_rank


logger = logging.getLogger(__name__)


def summarize_auc(values: Sequence[float]) -> Tuple[float, float]:
    """Media y desviación típica muestral (ddof=1; 0 con un único valor)."""
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise InvalidInputError("summarize_auc", "se requiere al menos un valor")
    std = float(values.std(ddof=1)) if values.size > 1 else 0.0
    return float(values.mean()), std


def compare_models(
        fold_auc: Mapping[str, Sequence[float]],
        alternative: Alternative = Alternative.TWO_SIDED,
) -> List[PairwiseComparison]:
    """
    Wilcoxon entre cada par de modelos sobre sus AUC por fold, en el orden de las columnas.
    Los pares sin ninguna diferencia se omiten.
    """
    comparisons = []
    for model_a, model_b in combinations(list(fold_auc), 2):
        sample = PairedSample(a=list(fold_auc[model_a]), b=list(fold_auc[model_b]))
        try:
            result = wilcoxon_signed_rank(sample, alternative)
        except DegenerateSampleError:
            logger.warning(f"'{model_a}' y '{model_b}' tienen AUC idénticas en todos los folds; se omite la prueba.")
            continue
        comparisons.append(PairwiseComparison(model_a=model_a, model_b=model_b, result=result))
    return comparisons
