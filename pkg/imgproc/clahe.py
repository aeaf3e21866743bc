"""
Ecualización adaptativa de histograma con límite de contraste (CLAHE) sobre parches en [0, 1].
"""

import logging
import math
from typing import Tuple

import numpy as np

from models import ClaheParams, InvalidInputError, RoiPatch


logger = logging.getLogger(__name__)


def bin_index(pixels: np.ndarray, bins: int) -> np.ndarray:
    """k = min(floor(x · bins), bins − 1)."""
    return np.minimum(np.floor(pixels * bins).astype(np.int64), bins - 1)


def tile_mapping(bin_ids: np.ndarray, bins: int, clip_limit: float) -> Tuple[np.ndarray, bool]:
    """
    Mapeo de ecualización de una tesela. Devuelve (mapeo por bin, es_constante); una tesela con
    un solo bin ocupado se marca constante y conserva su intensidad.
    """
    n = bin_ids.size
    counts = np.bincount(bin_ids.ravel(), minlength=bins)
    occupied = np.flatnonzero(counts)
    if occupied.size <= 1:
        return np.zeros(bins, dtype=np.float64), True

    hist = counts.astype(np.float64)
    if math.isfinite(clip_limit):
        limit = clip_limit * n / bins
        excess = np.sum(np.maximum(hist - limit, 0.0))
        hist = np.minimum(hist, limit) + excess / bins

    cdf = np.cumsum(hist)
    cdf_min = cdf[occupied[0]]
    mapping = (cdf - cdf_min) / (n - cdf_min)
    return np.clip(mapping, 0.0, 1.0), False


def _neighbours(length: int, tiles: int, tile_size: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Índices de las dos teselas vecinas y peso de la segunda; fuera de los centros el peso es 0."""
    position = (np.arange(length) + 0.5) / tile_size - 0.5
    position = np.clip(position, 0.0, tiles - 1)
    first = np.minimum(np.floor(position).astype(np.int64), tiles - 1)
    second = np.minimum(first + 1, tiles - 1)
    weight = position - first
    return first, second, weight


def equalize(pixels: np.ndarray, params: ClaheParams) -> np.ndarray:
    """CLAHE sobre una rejilla 2-D con intensidades en [0, 1]."""
    if pixels.ndim != 2 or pixels.size == 0:
        raise InvalidInputError("clahe", f"se requiere una rejilla 2-D no vacía, recibido {pixels.shape}")
    if pixels.min() < 0.0 or pixels.max() > 1.0:
        raise InvalidInputError("clahe", "las intensidades deben estar en [0, 1]")

    tile_rows, tile_cols = params.tiles
    height, width = pixels.shape
    tile_h = -(-height // tile_rows)
    tile_w = -(-width // tile_cols)
    padded = np.pad(pixels, ((0, tile_h * tile_rows - height), (0, tile_w * tile_cols - width)), mode="edge")
    bin_ids = bin_index(padded, params.bins)

    maps = np.zeros((tile_rows, tile_cols, params.bins), dtype=np.float64)
    identity = np.zeros((tile_rows, tile_cols), dtype=bool)
    for i in range(tile_rows):
        for j in range(tile_cols):
            tile = bin_ids[i * tile_h:(i + 1) * tile_h, j * tile_w:(j + 1) * tile_w]
            maps[i, j], identity[i, j] = tile_mapping(tile, params.bins, params.clip_limit)

    r0, r1, wy = _neighbours(padded.shape[0], tile_rows, tile_h)
    c0, c1, wx = _neighbours(padded.shape[1], tile_cols, tile_w)
    wy = wy[:, None]
    wx = wx[None, :]

    def mapped(rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
        ri = rows[:, None]
        ci = cols[None, :]
        return np.where(identity[ri, ci], padded, maps[ri, ci, bin_ids])

    v00, v01 = mapped(r0, c0), mapped(r0, c1)
    v10, v11 = mapped(r1, c0), mapped(r1, c1)
    out = (1.0 - wy) * ((1.0 - wx) * v00 + wx * v01) + wy * ((1.0 - wx) * v10 + wx * v11)

    all_identity = (
        identity[r0[:, None], c0[None, :]] & identity[r0[:, None], c1[None, :]]
        & identity[r1[:, None], c0[None, :]] & identity[r1[:, None], c1[None, :]]
    )
    out = np.where(all_identity, padded, out)
    return np.clip(out[:height, :width], 0.0, 1.0)


def clahe(patch: RoiPatch, params: ClaheParams = ClaheParams()) -> RoiPatch:
    """Aplica CLAHE a un parche ROI y conserva sus metadatos."""
    return patch.with_pixels(equalize(patch.pixels, params))
