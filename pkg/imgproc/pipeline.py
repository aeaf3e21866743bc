import logging

import numpy as np
from pydantic import BaseModel

from imgproc.clahe import clahe
from imgproc.geometry import extract_roi, split_midline
from imgproc.intensity import normalize_intensity
from imgproc.template import match_template_ncc
from models import ClaheParams, InvalidInputError, MatchLog, RoiPatch, Side


logger = logging.getLogger(__name__)


class PreprocessResult(BaseModel):
    """ROI crudo, ROI normalizado y registro del emparejamiento de una articulación."""
    raw: RoiPatch
    normalized: RoiPatch
    match: MatchLog


class Preprocessor:
    """
    Cadena de preprocesado: mitad por la línea media → plantilla NCC → ROI → CLAHE → min-max.
    """

    def __init__(self, template: np.ndarray, patch_size: int, clahe_params: ClaheParams = ClaheParams()) -> None:
        if template.ndim != 2:
            raise InvalidInputError("Preprocessor", f"la plantilla debe ser 2-D, recibido {template.shape}")
        self.template = template
        self.patch_size = patch_size
        self.clahe_params = clahe_params
        logger.info(
            f"Preprocessor inicializado: plantilla {template.shape}, ROI {patch_size}, "
            f"CLAHE teselas={clahe_params.tiles} clip={clahe_params.clip_limit} bins={clahe_params.bins}."
        )

    def process(self, pixels: np.ndarray, patient_id: str, side: Side) -> PreprocessResult:
        left, right = split_midline(pixels)
        half = left if side == Side.LEFT else right

        row, col, score = match_template_ncc(half, self.template)
        center = (row + self.template.shape[0] // 2, col + self.template.shape[1] // 2)
        raw = extract_roi(half, center, self.patch_size, patient_id=patient_id, side=side)
        normalized = normalize_intensity(clahe(raw, self.clahe_params))

        logger.debug(f"({patient_id}, {side.value}): plantilla en ({row}, {col}) con NCC {score:.4f}.")
        return PreprocessResult(
            raw=raw,
            normalized=normalized,
            match=MatchLog(patient_id=patient_id, side=side, row_offset=row, col_offset=col, score=score),
        )
