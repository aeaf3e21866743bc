"""
Conversión de filas del manifiesto y parches preprocesados en arrays de entrada para la red.
"""

import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from data import PatchStore
from imgproc import augment
from models import AugmentPolicy, InvalidInputError, ManifestRow, RoiPatch
from nets import stack_patches


logger = logging.getLogger(__name__)

CaseArrays = Tuple[np.ndarray, np.ndarray, np.ndarray]


def augment_stream(seed: int, fold: int, patient_index: int, row: ManifestRow) -> np.random.SeedSequence:
    return np.random.SeedSequence([seed, fold, patient_index, row.side.code])


def case_arrays(rows: Sequence[ManifestRow], patches: PatchStore, dtype=np.float32) -> CaseArrays:
    """(entradas N x 1 x P x P, auxiliares N x 3, etiquetas N) en el orden de `rows`."""
    patch_list = [patches.get(row.patient_id, row.side) for row in rows]
    return _arrays(patch_list, list(rows), dtype)


def training_arrays(
        rows: Sequence[ManifestRow],
        patches: PatchStore,
        patient_index: Dict[str, int],
        policy: Optional[AugmentPolicy],
        seed: int,
        fold: int,
        dtype=np.float32,
) -> CaseArrays:
    """
    Casos de entrenamiento seguidos de sus copias aumentadas. Cada articulación usa el flujo
    SeedSequence([seed, fold, índice de paciente, lado]).
    """
    patch_list: List[RoiPatch] = []
    owners: List[ManifestRow] = []
    for row in rows:
        patch = patches.get(row.patient_id, row.side)
        patch_list.append(patch)
        owners.append(row)
        if policy is None:
            continue
        stream = augment_stream(seed, fold, patient_index[row.patient_id], row)
        for copy in augment(patch, policy, stream):
            patch_list.append(copy.with_pixels(copy.pixels, normalized=patch.normalized))
            owners.append(row)

    if policy is not None:
        logger.debug(f"Fold {fold}: {len(rows)} casos de entrenamiento ampliados a {len(patch_list)}.")
    return _arrays(patch_list, owners, dtype)


def _arrays(patch_list: List[RoiPatch], rows: List[ManifestRow], dtype) -> CaseArrays:
    inputs = stack_patches(patch_list).astype(dtype)
    aux = np.stack([row.aux.as_array() for row in rows]) if rows else np.zeros((0, 3))
    labels = np.array([int(row.label) for row in rows], dtype=np.int64)
    return inputs, aux, labels


def check_normalization(patches: PatchStore, normalize: bool) -> None:
    """Los parches deben corresponder a `TrainConfig.normalize`."""
    if patches.intensity_normalized != normalize:
        expected = "normalizados" if normalize else "crudos"
        raise InvalidInputError(
            "train_fold",
            f"la configuración pide parches {expected} pero el almacén contiene los contrarios",
        )
