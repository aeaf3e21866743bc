import numpy as np

from models import RoiPatch


CONSTANT_FILL = 0.5


def rescale_unit(pixels: np.ndarray) -> np.ndarray:
    """Reescalado min-max a [0, 1]; una rejilla constante vale 0.5 en todos sus píxeles."""
    lo = float(pixels.min())
    hi = float(pixels.max())
    if hi == lo:
        return np.full(pixels.shape, CONSTANT_FILL, dtype=np.float64)
    return (pixels - lo) / (hi - lo)


def normalize_intensity(patch: RoiPatch) -> RoiPatch:
    """Normaliza el parche a [0, 1] y lo marca listo para la red."""
    return patch.with_pixels(rescale_unit(np.asarray(patch.pixels, dtype=np.float64)), normalized=True)
