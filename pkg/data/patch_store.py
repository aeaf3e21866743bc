"""
Colección de parches ROI preprocesados indexada por articulación, con su persistencia en disco.
"""

import logging
from pathlib import Path
from typing import Dict, Iterator, List, Tuple, Union

import pandas as pd

from data.pgm import read_pgm, write_pgm
from models import InvalidInputError, Manifest, RoiPatch, Side


logger = logging.getLogger(__name__)

PATCH_INDEX_FILE = "patches.csv"
PATCH_INDEX_COLUMNS = ["patient_id", "side", "roi_path", "norm_path"]


class PatchStore:
    """
    Mapa (patient_id, side) -> RoiPatch. `intensity_normalized` indica si los parches pasaron por
    CLAHE y el reescalado min-max o son los ROI crudos.
    """

    def __init__(self, intensity_normalized: bool = True) -> None:
        self.intensity_normalized = intensity_normalized
        self._patches: Dict[Tuple[str, Side], RoiPatch] = {}

    def add(self, patch: RoiPatch) -> None:
        self._patches[(patch.patient_id, patch.side)] = patch

    def get(self, patient_id: str, side: Side) -> RoiPatch:
        try:
            return self._patches[(patient_id, side)]
        except KeyError:
            raise InvalidInputError("PatchStore.get", f"no hay parche para ({patient_id}, {side.value})")

    def __contains__(self, key: Tuple[str, Side]) -> bool:
        return key in self._patches

    def __len__(self) -> int:
        return len(self._patches)

    def __iter__(self) -> Iterator[RoiPatch]:
        return iter(self._patches.values())

    @property
    def side_length(self) -> int:
        sides = {patch.side_length for patch in self._patches.values()}
        if len(sides) != 1:
            raise InvalidInputError("PatchStore.side_length", f"tamaños de parche inconsistentes: {sorted(sides)}")
        return sides.pop()

    def require(self, manifest: Manifest) -> None:
        """Verifica que exista un parche para cada fila del manifiesto."""
        missing = [row.case_id for row in manifest.rows if row.key not in self._patches]
        if missing:
            shown = ", ".join(missing[:5])
            raise InvalidInputError(
                "PatchStore.require",
                f"faltan {len(missing)} parches preprocesados (p. ej. {shown})",
            )


def _patch_file(patch: RoiPatch) -> str:
    return f"{patch.patient_id}_{patch.side.short}.pgm"


def save_patch_stores(directory: Union[str, Path], raw: PatchStore, normalized: PatchStore) -> Path:
    """
    Persiste los ROI crudos en `roi/` y los normalizados en `norm/`, más el índice `patches.csv`.
    """
    directory = Path(directory)
    records: List[dict] = []
    for patch in raw:
        name = _patch_file(patch)
        write_pgm(directory / "roi" / name, patch.pixels)
        norm_patch = normalized.get(patch.patient_id, patch.side)
        write_pgm(directory / "norm" / name, norm_patch.pixels)
        records.append({
            "patient_id": patch.patient_id,
            "side": patch.side.value,
            "roi_path": f"roi/{name}",
            "norm_path": f"norm/{name}",
        })

    index_path = directory / PATCH_INDEX_FILE
    pd.DataFrame(records, columns=PATCH_INDEX_COLUMNS).to_csv(index_path, index=False, lineterminator="\n")
    logger.info(f"{len(records)} parches guardados en {directory}.")
    return index_path


def load_patch_store(index_path: Union[str, Path], normalized: bool = True) -> PatchStore:
    """
    Carga los parches listados en `patches.csv`. Con `normalized=False` se leen los ROI crudos,
    que al venir de un PGM ya están en [0, 1] y se marcan listos para la red.
    """
    index_path = Path(index_path)
    if index_path.is_dir():
        index_path = index_path / PATCH_INDEX_FILE
    df = pd.read_csv(index_path, dtype=str, keep_default_na=False)
    missing = [col for col in PATCH_INDEX_COLUMNS if col not in df.columns]
    if missing:
        raise InvalidInputError("load_patch_store", f"faltan las columnas {missing} en {index_path}")

    column = "norm_path" if normalized else "roi_path"
    store = PatchStore(intensity_normalized=normalized)
    for record in df.itertuples(index=False):
        pixels = read_pgm(index_path.parent / getattr(record, column))
        store.add(RoiPatch(
            pixels=pixels,
            patient_id=record.patient_id,
            side=Side(record.side),
            normalized=True,
        ))
    logger.info(f"{len(store)} parches cargados desde {index_path} ({column}).")
    return store
