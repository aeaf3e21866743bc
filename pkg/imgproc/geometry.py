import logging
from typing import Tuple

import numpy as np

from models import InvalidInputError, RoiPatch, Side


logger = logging.getLogger(__name__)

MIN_ROI_SIDE = 8


def split_midline(image: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Separa la radiografía por la línea media vertical. La mitad derecha se refleja para compartir
    la orientación canónica de la izquierda; con ancho impar la columna central se descarta.
    """
    if image.ndim != 2 or image.shape[1] < 2:
        raise InvalidInputError("split_midline", f"se requiere una rejilla 2-D de ancho >= 2, recibido {image.shape}")
    width = image.shape[1]
    half = width // 2
    left = image[:, :half].copy()
    right = image[:, width - half:][:, ::-1].copy()
    return left, right


def extract_roi(
        image: np.ndarray,
        center: Tuple[int, int],
        size: int,
        patient_id: str = "",
        side: Side = Side.LEFT,
) -> RoiPatch:
    """
    Ventana size x size centrada en `center` (filas [r - size//2, r - size//2 + size)).
    Las zonas fuera de la imagen se rellenan replicando el borde.
    """
    if size < MIN_ROI_SIDE:
        raise InvalidInputError("extract_roi", f"el lado del ROI debe ser >= {MIN_ROI_SIDE}, recibido {size}")
    if image.ndim != 2:
        raise InvalidInputError("extract_roi", f"se requiere una rejilla 2-D, recibido {image.shape}")

    height, width = image.shape
    top = int(center[0]) - size // 2
    left = int(center[1]) - size // 2
    pad_top = max(0, -top)
    pad_left = max(0, -left)
    pad_bottom = max(0, top + size - height)
    pad_right = max(0, left + size - width)

    padded = np.pad(image, ((pad_top, pad_bottom), (pad_left, pad_right)), mode="edge")
    window = padded[top + pad_top:top + pad_top + size, left + pad_left:left + pad_left + size]
    return RoiPatch(pixels=window.copy(), patient_id=patient_id, side=side, normalized=False)
