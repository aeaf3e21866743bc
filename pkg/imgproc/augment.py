import logging
from typing import List

import numpy as np
from scipy.ndimage import rotate, shift

from models import AugmentPolicy, InvalidInputError, RoiPatch


logger = logging.getLogger(__name__)


def hflip(patch: RoiPatch) -> RoiPatch:
    """Reflejo horizontal del parche."""
    return patch.with_pixels(np.ascontiguousarray(patch.pixels[:, ::-1]))


def copy_stream(stream: np.random.SeedSequence, copy_index: int) -> np.random.SeedSequence:
    """Flujo independiente para la copia `copy_index`."""
    return np.random.SeedSequence(stream.entropy, spawn_key=tuple(stream.spawn_key) + (copy_index,))


def _augment_once(pixels: np.ndarray, policy: AugmentPolicy, rng: np.random.Generator) -> np.ndarray:
    out = np.array(pixels, dtype=np.float64, copy=True)

    if policy.hflip_prob > 0.0 and rng.random() < policy.hflip_prob:
        out = np.ascontiguousarray(out[:, ::-1])

    if policy.max_rotation_deg > 0.0:
        angle = rng.uniform(-policy.max_rotation_deg, policy.max_rotation_deg)
        out = rotate(out, angle, reshape=False, order=1, mode="nearest")

    if policy.max_translate_px > 0.0:
        offset = rng.uniform(-policy.max_translate_px, policy.max_translate_px, size=2)
        out = shift(out, offset, order=1, mode="nearest")

    if policy.intensity_jitter > 0.0:
        out = out + rng.uniform(-policy.intensity_jitter, policy.intensity_jitter)

    return np.clip(out, 0.0, 1.0)


def augment(patch: RoiPatch, policy: AugmentPolicy, stream: np.random.SeedSequence) -> List[RoiPatch]:
    """
    Genera `copies_per_image` copias aumentadas: reflejo, rotación bilineal, traslación y
    desplazamiento de intensidad, en ese orden. Las operaciones de rango nulo se omiten.
    """
    side = patch.side_length
    if policy.max_translate_px > side / 8:
        raise InvalidInputError(
            "augment",
            f"max_translate_px={policy.max_translate_px} supera P/8 = {side / 8} para parches de lado {side}",
        )

    copies = []
    for index in range(policy.copies_per_image):
        rng = np.random.default_rng(copy_stream(stream, index))
        copies.append(patch.with_pixels(_augment_once(patch.pixels, policy, rng)))
    logger.debug(f"{len(copies)} copias aumentadas para ({patch.patient_id}, {patch.side.value}).")
    return copies
