"""
Autodiff package: minimal reverse-mode differentiation engine with the layers and the
optimizer the backbones need.
"""

from autodiff.exceptions import AutodiffError, InvalidShapeError, GraphCycleError
from autodiff.tensor import Tensor, Parameter, backward, topological_order
from autodiff.functional import (
    BN_EPS,
    BN_MOMENTUM,
    BatchNormStats,
    conv2d,
    relu,
    max_pool2d,
    avg_pool2d,
    global_avg_pool,
    batch_norm,
    concat_channels,
    add,
    mul,
    sum_all,
    linear,
    softmax_cross_entropy,
    softmax,
)
from autodiff.optim import AdamW, AdamWHyper, AdamWState, adamw_step
from autodiff.gradcheck import max_relative_error

__all__ = [
    # Exceptions
    "AutodiffError",
    "InvalidShapeError",
    "GraphCycleError",
    # Core
    "Tensor",
    "Parameter",
    "backward",
    "topological_order",
    # Layers
    "BN_EPS",
    "BN_MOMENTUM",
    "BatchNormStats",
    "conv2d",
    "relu",
    "max_pool2d",
    "avg_pool2d",
    "global_avg_pool",
    "batch_norm",
    "concat_channels",
    "add",
    "mul",
    "sum_all",
    "linear",
    "softmax_cross_entropy",
    "softmax",
    # Optimizer
    "AdamW",
    "AdamWHyper",
    "AdamWState",
    "adamw_step",
    # Gradient check
    "max_relative_error",
]
