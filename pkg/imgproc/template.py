import logging
from typing import Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from imgproc.exceptions import NoMatchError
from models import InvalidInputError


logger = logging.getLogger(__name__)


def check_shapes(image: np.ndarray, template: np.ndarray) -> None:
    if image.ndim != 2 or template.ndim != 2:
        raise InvalidInputError("match_template_ncc", "imagen y plantilla deben ser rejillas 2-D")
    if template.shape[0] > image.shape[0] or template.shape[1] > image.shape[1]:
        raise InvalidInputError(
            "match_template_ncc",
            f"la plantilla {template.shape} es mayor que la imagen {image.shape}",
        )


def ncc_map(image: np.ndarray, template: np.ndarray) -> np.ndarray:
    """
    Correlación cruzada normalizada de media cero para cada desplazamiento válido.
    Las ventanas de varianza nula valen NaN.
    """
    check_shapes(image, template)

    image = np.asarray(image, dtype=np.float64)
    template = np.asarray(template, dtype=np.float64)

    t = template - template.mean()
    t_norm = np.sqrt(np.sum(t * t))

    windows = sliding_window_view(image, template.shape)
    centered = windows - windows.mean(axis=(2, 3), keepdims=True)
    w_norm = np.sqrt(np.einsum("rcij,rcij->rc", centered, centered))
    numerator = np.einsum("rcij,ij->rc", centered, t)

    constant = np.ptp(windows, axis=(2, 3)) == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        scores = numerator / (w_norm * t_norm)
    scores = np.clip(scores, -1.0, 1.0)
    scores[constant] = np.nan
    return scores


def match_template_ncc(image: np.ndarray, template: np.ndarray) -> Tuple[int, int, float]:
    """
    Desplazamiento (fila, columna) que maximiza la NCC y su puntuación en [-1, 1].
    Los empates se resuelven por la menor fila y después la menor columna.
    """
    check_shapes(image, template)
    if np.ptp(template) == 0:
        raise NoMatchError(image.shape, template.shape, "la plantilla tiene varianza nula")

    scores = ncc_map(image, template)
    valid = ~np.isnan(scores)
    skipped = int(scores.size - valid.sum())
    if skipped:
        logger.debug(f"{skipped} ventanas de varianza nula omitidas en el emparejamiento.")
    if not valid.any():
        raise NoMatchError(image.shape, template.shape, "todas las ventanas candidatas tienen varianza nula")

    # argmax devuelve el primer máximo en orden fila-columna
    flat = np.where(valid, scores, -np.inf).ravel()
    index = int(np.argmax(flat))
    row, col = divmod(index, scores.shape[1])
    return row, col, float(flat[index])
