"""
Comprobación de gradientes por diferencias finitas centrales.
"""

from typing import Callable, Sequence

import numpy as np

from autodiff.functional import mul, sum_all
from autodiff.tensor import Tensor, backward


DEFAULT_STEP = 1e-4
DENOMINATOR_FLOOR = 1e-8


def max_relative_error(
        fn: Callable[[], Tensor],
        inputs: Sequence[Tensor],
        h: float = DEFAULT_STEP,
        seed: int = 0,
) -> float:
    """
    Error relativo máximo entre el gradiente analítico y el numérico de Σ fn() ⊙ R, con R
    aleatorio fijo. El denominador es max(|analítico|, |numérico|, 1e-8).
    """
    out = fn()
    projection = np.random.default_rng(seed).standard_normal(out.shape)

    for tensor in inputs:
        tensor.zero_grad()
    loss = sum_all(mul(out, Tensor(projection.astype(out.dtype))))
    backward(loss, parameters=inputs)
    analytic = [np.array(t.grad, dtype=np.float64) for t in inputs]

    worst = 0.0
    for tensor, grad in zip(inputs, analytic):
        values = tensor.data
        for idx in np.ndindex(values.shape):
            original = values[idx]
            values[idx] = original + h
            plus = float(np.sum(fn().data * projection))
            values[idx] = original - h
            minus = float(np.sum(fn().data * projection))
            values[idx] = original
            numeric = (plus - minus) / (2.0 * h)
            denominator = max(abs(grad[idx]), abs(numeric), DENOMINATOR_FLOOR)
            worst = max(worst, abs(grad[idx] - numeric) / denominator)
    return worst
