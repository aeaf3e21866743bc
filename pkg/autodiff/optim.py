"""
Optimizador AdamW con decaimiento de pesos desacoplado.
"""

import logging
from typing import List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from autodiff.exceptions import InvalidShapeError
from autodiff.tensor import Parameter
from models import NumericError


logger = logging.getLogger(__name__)


class AdamWHyper(BaseModel):
    """Hiperparámetros de AdamW."""
    model_config = ConfigDict(frozen=True)

    lr: float = Field(default=5e-3, gt=0.0)
    beta1: float = Field(default=0.9, ge=0.0, lt=1.0)
    beta2: float = Field(default=0.999, ge=0.0, lt=1.0)
    eps: float = Field(default=1e-8, gt=0.0)
    weight_decay: float = Field(default=0.01, ge=0.0)


class AdamWState:
    """Momentos por parámetro y contador de pasos."""

    def __init__(self, params: Sequence[np.ndarray], hyper: AdamWHyper = AdamWHyper()) -> None:
        self.hyper = hyper
        self.step = 0
        self.m: List[np.ndarray] = [np.zeros_like(p) for p in params]
        self.v: List[np.ndarray] = [np.zeros_like(p) for p in params]


def adamw_step(
        params: Sequence[np.ndarray],
        grads: Sequence[np.ndarray],
        state: AdamWState,
        names: Optional[Sequence[str]] = None,
) -> List[np.ndarray]:
    """
    Un paso de AdamW. Devuelve los parámetros nuevos y actualiza `state`. Si algún gradiente
    no es finito no se modifica nada.
    """
    names = list(names) if names is not None else [f"param_{i}" for i in range(len(params))]
    if not len(params) == len(grads) == len(state.m) == len(names):
        raise InvalidShapeError("adamw_step", "parámetros, gradientes y estado deben tener la misma longitud")

    for param, grad, m, name in zip(params, grads, state.m, names):
        if param.shape != grad.shape or param.shape != m.shape:
            raise InvalidShapeError("adamw_step", f"forma inconsistente en '{name}'", param.shape, grad.shape)
        if not np.all(np.isfinite(grad)):
            raise NumericError("adamw_step", "gradiente no finito", parameter=name)

    hyper = state.hyper
    state.step += 1
    bias1 = 1.0 - hyper.beta1 ** state.step
    bias2 = 1.0 - hyper.beta2 ** state.step

    updated = []
    for i, (param, grad) in enumerate(zip(params, grads)):
        state.m[i] = hyper.beta1 * state.m[i] + (1.0 - hyper.beta1) * grad
        state.v[i] = hyper.beta2 * state.v[i] + (1.0 - hyper.beta2) * grad * grad
        m_hat = state.m[i] / bias1
        v_hat = state.v[i] / bias2
        step = hyper.lr * (m_hat / (np.sqrt(v_hat) + hyper.eps))
        decay = hyper.lr * hyper.weight_decay * param
        updated.append((param - step - decay).astype(param.dtype))
    return updated


class AdamW:
    """AdamW sobre una lista de Parameter; los gradientes ausentes cuentan como cero."""

    def __init__(self, params: Sequence[Parameter], hyper: AdamWHyper = AdamWHyper()) -> None:
        self.params = list(params)
        self.state = AdamWState([p.data for p in self.params], hyper)

    def zero_grad(self) -> None:
        for param in self.params:
            param.zero_grad()

    def step(self) -> None:
        grads = [p.grad if p.grad is not None else np.zeros_like(p.data) for p in self.params]
        updated = adamw_step(
            [p.data for p in self.params],
            grads,
            self.state,
            names=[p.name for p in self.params],
        )
        for param, data in zip(self.params, updated):
            param.data = data
