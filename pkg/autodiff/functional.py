"""
Capas diferenciables sobre Tensor. Cada operación valida formas, calcula la salida con numpy
y registra su regla de retropropagación.
"""

import logging
from typing import Optional, Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.special import logsumexp, softmax as _softmax

from autodiff.exceptions import InvalidShapeError
from autodiff.tensor import Tensor
from models import NumericError


logger = logging.getLogger(__name__)

BN_MOMENTUM = 0.1
BN_EPS = 1e-5


def _as_tensor(value) -> Tensor:
    return value if isinstance(value, Tensor) else Tensor(np.asarray(value))


# --- Convolución ------------------------------------------------------------------------------

def conv2d(x: Tensor, weight: Tensor, bias: Optional[Tensor] = None, stride: int = 1, padding: int = 0) -> Tensor:
    """Correlación cruzada 2-D. x: N x C x H x W; weight: O x C x K x K; bias: O."""
    if x.data.ndim != 4 or weight.data.ndim != 4:
        raise InvalidShapeError("conv2d", "se esperaban tensores 4-D", x.shape, weight.shape)
    n, c, h, w = x.shape
    out_c, in_c, kh, kw = weight.shape
    if in_c != c:
        raise InvalidShapeError("conv2d", "los canales de entrada no coinciden", x.shape, weight.shape)
    if kh != kw:
        raise InvalidShapeError("conv2d", "el kernel debe ser cuadrado", weight.shape)
    if bias is not None and bias.shape != (out_c,):
        raise InvalidShapeError("conv2d", "el sesgo debe tener un valor por canal de salida", bias.shape)
    if stride < 1 or padding < 0:
        raise InvalidShapeError("conv2d", f"stride={stride} o padding={padding} inválidos")
    k = kh
    if h + 2 * padding < k or w + 2 * padding < k:
        raise InvalidShapeError("conv2d", "el kernel no cabe en la entrada con relleno", x.shape, weight.shape)

    xp = np.pad(x.data, ((0, 0), (0, 0), (padding, padding), (padding, padding))) if padding else x.data
    windows = sliding_window_view(xp, (k, k), axis=(2, 3))[:, :, ::stride, ::stride]
    out_h, out_w = windows.shape[2], windows.shape[3]

    out = np.tensordot(windows, weight.data, axes=([1, 4, 5], [1, 2, 3])).transpose(0, 3, 1, 2)
    if bias is not None:
        out = out + bias.data[None, :, None, None]
    out = np.ascontiguousarray(out)

    def backward_fn(g: np.ndarray):
        g_weight = np.tensordot(g, windows, axes=([0, 2, 3], [0, 2, 3]))
        g_bias = g.sum(axis=(0, 2, 3)) if bias is not None else None
        g_cols = np.tensordot(g, weight.data, axes=([1], [0]))  # N x Ho x Wo x C x K x K
        g_xp = np.zeros_like(xp)
        for i in range(k):
            for j in range(k):
                g_xp[:, :, i:i + stride * out_h:stride, j:j + stride * out_w:stride] += (
                    g_cols[:, :, :, :, i, j].transpose(0, 3, 1, 2)
                )
        g_x = g_xp[:, :, padding:padding + h, padding:padding + w] if padding else g_xp
        return g_x, g_weight, g_bias

    parents = (x, weight) if bias is None else (x, weight, bias)
    return Tensor(out, parents=parents, op="conv2d", backward_fn=backward_fn)


# --- Activaciones y pooling -------------------------------------------------------------------

def relu(x: Tensor) -> Tensor:
    mask = x.data > 0
    out = np.where(mask, x.data, 0).astype(x.dtype)

    def backward_fn(g: np.ndarray):
        return (g * mask,)

    return Tensor(out, parents=(x,), op="relu", backward_fn=backward_fn)


def _pool_windows(x: Tensor, kernel: int, operation: str) -> np.ndarray:
    if x.data.ndim != 4:
        raise InvalidShapeError(operation, "se esperaba un tensor 4-D", x.shape)
    n, c, h, w = x.shape
    if kernel < 1 or h % kernel or w % kernel:
        raise InvalidShapeError(operation, f"el tamaño espacial debe ser múltiplo de {kernel}", x.shape)
    blocks = x.data.reshape(n, c, h // kernel, kernel, w // kernel, kernel)
    return blocks.transpose(0, 1, 2, 4, 3, 5).reshape(n, c, h // kernel, w // kernel, kernel * kernel)


def max_pool2d(x: Tensor, kernel: int = 2) -> Tensor:
    """Max pooling sin solapamiento; en empates el gradiente va al primer máximo."""
    windows = _pool_windows(x, kernel, "max_pool2d")
    arg = np.argmax(windows, axis=-1)
    out = np.take_along_axis(windows, arg[..., None], axis=-1)[..., 0]
    n, c, h, w = x.shape

    def backward_fn(g: np.ndarray):
        g_windows = np.zeros(windows.shape, dtype=g.dtype)
        np.put_along_axis(g_windows, arg[..., None], g[..., None], axis=-1)
        g_x = g_windows.reshape(n, c, h // kernel, w // kernel, kernel, kernel)
        return (g_x.transpose(0, 1, 2, 4, 3, 5).reshape(n, c, h, w),)

    return Tensor(out, parents=(x,), op="max_pool2d", backward_fn=backward_fn)


def avg_pool2d(x: Tensor, kernel: int = 2) -> Tensor:
    """Average pooling sin solapamiento."""
    windows = _pool_windows(x, kernel, "avg_pool2d")
    out = windows.mean(axis=-1)
    area = kernel * kernel

    def backward_fn(g: np.ndarray):
        g_x = np.repeat(np.repeat(g, kernel, axis=2), kernel, axis=3) / area
        return (g_x.astype(g.dtype),)

    return Tensor(out, parents=(x,), op="avg_pool2d", backward_fn=backward_fn)


def global_avg_pool(x: Tensor) -> Tensor:
    """Media espacial por canal: N x C x H x W -> N x C."""
    if x.data.ndim != 4:
        raise InvalidShapeError("global_avg_pool", "se esperaba un tensor 4-D", x.shape)
    n, c, h, w = x.shape
    out = x.data.mean(axis=(2, 3))

    def backward_fn(g: np.ndarray):
        g_x = np.broadcast_to(g[:, :, None, None] / (h * w), (n, c, h, w))
        return (np.ascontiguousarray(g_x).astype(g.dtype),)

    return Tensor(out, parents=(x,), op="global_avg_pool", backward_fn=backward_fn)


# --- Normalización por lotes ------------------------------------------------------------------

class BatchNormStats:
    """Estadísticas acumuladas de batch_norm para el modo de evaluación."""

    def __init__(self, channels: int, dtype=np.float64, momentum: float = BN_MOMENTUM, eps: float = BN_EPS) -> None:
        self.running_mean = np.zeros(channels, dtype=dtype)
        self.running_var = np.ones(channels, dtype=dtype)
        self.momentum = momentum
        self.eps = eps

    @property
    def channels(self) -> int:
        return int(self.running_mean.shape[0])


def batch_norm(x: Tensor, gamma: Tensor, beta: Tensor, stats: BatchNormStats, training: bool) -> Tensor:
    """
    Normalización por canal de un tensor N x C x H x W. En entrenamiento usa las estadísticas
    del lote y actualiza las acumuladas (varianza insesgada); en evaluación usa las acumuladas.
    """
    if x.data.ndim != 4:
        raise InvalidShapeError("batch_norm", "se esperaba un tensor 4-D", x.shape)
    n, c, h, w = x.shape
    if gamma.shape != (c,) or beta.shape != (c,) or stats.channels != c:
        raise InvalidShapeError("batch_norm", "parámetros con canales distintos a la entrada", x.shape, gamma.shape)

    axes = (0, 2, 3)
    count = n * h * w
    if training:
        if count < 2:
            raise InvalidShapeError("batch_norm", "el modo entrenamiento requiere más de un valor por canal", x.shape)
        mean = x.data.mean(axis=axes)
        var = x.data.var(axis=axes)
        unbiased = var * count / (count - 1)
        stats.running_mean[...] = (1 - stats.momentum) * stats.running_mean + stats.momentum * mean
        stats.running_var[...] = (1 - stats.momentum) * stats.running_var + stats.momentum * unbiased
    else:
        mean = stats.running_mean.astype(x.dtype)
        var = stats.running_var.astype(x.dtype)

    inv_std = 1.0 / np.sqrt(var + stats.eps)
    x_hat = (x.data - mean[None, :, None, None]) * inv_std[None, :, None, None]
    out = gamma.data[None, :, None, None] * x_hat + beta.data[None, :, None, None]

    def backward_fn(g: np.ndarray):
        g_gamma = (g * x_hat).sum(axis=axes)
        g_beta = g.sum(axis=axes)
        scale = (gamma.data * inv_std)[None, :, None, None]
        if training:
            g_x = scale / count * (
                count * g - g_beta[None, :, None, None] - x_hat * g_gamma[None, :, None, None]
            )
        else:
            g_x = scale * g
        return g_x.astype(g.dtype), g_gamma, g_beta

    return Tensor(out.astype(x.dtype), parents=(x, gamma, beta), op="batch_norm", backward_fn=backward_fn)


# --- Combinaciones ---------------------------------------------------------------------------

def concat_channels(tensors: Sequence[Tensor]) -> Tensor:
    """Concatena por el eje 1 (canales o características)."""
    if not tensors:
        raise InvalidShapeError("concat_channels", "se requiere al menos un tensor")
    ref = tensors[0].shape
    for t in tensors[1:]:
        if t.data.ndim != len(ref) or t.shape[0] != ref[0] or t.shape[2:] != ref[2:]:
            raise InvalidShapeError("concat_channels", "las formas difieren fuera del eje 1", ref, t.shape)
    sizes = [t.shape[1] for t in tensors]
    out = np.concatenate([t.data for t in tensors], axis=1)
    bounds = np.cumsum([0] + sizes)

    def backward_fn(g: np.ndarray):
        return tuple(g[:, bounds[i]:bounds[i + 1]] for i in range(len(tensors)))

    return Tensor(out, parents=tuple(tensors), op="concat_channels", backward_fn=backward_fn)


def add(a: Tensor, b: Tensor) -> Tensor:
    if a.shape != b.shape:
        raise InvalidShapeError("add", "los sumandos deben tener la misma forma", a.shape, b.shape)

    def backward_fn(g: np.ndarray):
        return g, g

    return Tensor(a.data + b.data, parents=(a, b), op="add", backward_fn=backward_fn)


def mul(a: Tensor, b: Tensor) -> Tensor:
    """Producto elemento a elemento."""
    a, b = _as_tensor(a), _as_tensor(b)
    if a.shape != b.shape:
        raise InvalidShapeError("mul", "los factores deben tener la misma forma", a.shape, b.shape)

    def backward_fn(g: np.ndarray):
        return g * b.data, g * a.data

    return Tensor(a.data * b.data, parents=(a, b), op="mul", backward_fn=backward_fn)


def sum_all(x: Tensor) -> Tensor:
    """Suma de todos los elementos (escalar)."""
    shape = x.shape

    def backward_fn(g: np.ndarray):
        return (np.broadcast_to(g, shape).astype(x.dtype).copy(),)

    return Tensor(np.sum(x.data), parents=(x,), op="sum_all", backward_fn=backward_fn)


def linear(x: Tensor, weight: Tensor, bias: Optional[Tensor] = None) -> Tensor:
    """x: N x F; weight: O x F; bias: O."""
    if x.data.ndim != 2 or weight.data.ndim != 2 or x.shape[1] != weight.shape[1]:
        raise InvalidShapeError("linear", "dimensiones de entrada incompatibles", x.shape, weight.shape)
    if bias is not None and bias.shape != (weight.shape[0],):
        raise InvalidShapeError("linear", "el sesgo debe tener un valor por salida", bias.shape)

    out = x.data @ weight.data.T
    if bias is not None:
        out = out + bias.data[None, :]

    def backward_fn(g: np.ndarray):
        g_x = g @ weight.data
        g_w = g.T @ x.data
        g_b = g.sum(axis=0) if bias is not None else None
        return g_x, g_w, g_b

    parents = (x, weight) if bias is None else (x, weight, bias)
    return Tensor(out, parents=parents, op="linear", backward_fn=backward_fn)


# --- Pérdida e inferencia ----------------------------------------------------------------------

def softmax_cross_entropy(logits: Tensor, labels: np.ndarray) -> Tensor:
    """Media sobre el lote de −log softmax(logits)[label] para dos clases."""
    labels = np.asarray(labels, dtype=np.int64)
    if logits.data.ndim != 2 or logits.shape[1] != 2:
        raise InvalidShapeError("softmax_cross_entropy", "se esperaban logits N x 2", logits.shape)
    if labels.shape != (logits.shape[0],):
        raise InvalidShapeError("softmax_cross_entropy", "se espera una etiqueta por fila", logits.shape, labels.shape)
    if np.any((labels < 0) | (labels > 1)):
        raise InvalidShapeError("softmax_cross_entropy", "las etiquetas deben ser 0 o 1")
    if not np.all(np.isfinite(logits.data)):
        raise NumericError("softmax_cross_entropy", "logits no finitos")

    n = logits.shape[0]
    log_probs = logits.data - logsumexp(logits.data, axis=1, keepdims=True)
    rows = np.arange(n)
    loss = -log_probs[rows, labels].mean()

    def backward_fn(g: np.ndarray):
        grad = np.exp(log_probs)
        grad[rows, labels] -= 1.0
        return ((grad / n * g).astype(logits.dtype),)

    return Tensor(np.asarray(loss, dtype=logits.dtype), parents=(logits,), op="softmax_cross_entropy",
                  backward_fn=backward_fn)


def softmax(logits) -> np.ndarray:
    """Probabilidades por fila. Sólo inferencia: no registra gradiente."""
    data = logits.data if isinstance(logits, Tensor) else np.asarray(logits)
    return _softmax(data, axis=-1)

