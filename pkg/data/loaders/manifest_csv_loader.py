import logging
from pathlib import Path
from typing import Dict, List, Tuple, Union

import pandas as pd
from pydantic import ValidationError

from data.exceptions import DuplicateJointError, ManifestParseError
from data.loaders.i_data_loader import IDataLoader
from models import Manifest, ManifestRow, Side


logger = logging.getLogger(__name__)

MANIFEST_COLUMNS = ["image_path", "patient_id", "side", "age_years", "sex", "label"]


def _as_int(value: str) -> Union[int, str]:
    """Convierte a entero cuando es posible; si no, deja el texto para que la validación lo rechace."""
    try:
        return int(value.strip())
    except ValueError:
        return value


class ManifestCSVLoader(IDataLoader):
    """
    Implementación de IDataLoader que carga el manifiesto CSV con cabecera
    `image_path,patient_id,side,age_years,sex,label`.
    """

    def __init__(self, columns: List[str] = MANIFEST_COLUMNS) -> None:
        super().__init__(columns)

    def load(self, path: Path) -> Manifest:
        """Carga y valida el manifiesto. Las filas mal formadas se reportan con su número de línea."""
        path = Path(path)
        try:
            df = pd.read_csv(
                path, header=0, dtype=str, keep_default_na=False, skipinitialspace=True, skip_blank_lines=False
            )
        except FileNotFoundError:
            logger.error(f"Manifiesto no encontrado en la ruta {path}")
            raise
        except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
            raise ManifestParseError(str(path), [(1, f"CSV ilegible: {e}")])

        df.columns = [str(col).strip() for col in df.columns]
        missing = [col for col in self.columns if col not in df.columns]
        if missing:
            raise ManifestParseError(str(path), [(1, f"faltan las columnas {missing}")])
        df = df.fillna("")

        rows: List[ManifestRow] = []
        lines: List[int] = []
        offenders: List[Tuple[int, str]] = []
        for index, record in df[self.columns].iterrows():
            # La cabecera ocupa la línea 1
            line = int(index) + 2
            if not any(value.strip() for value in record):
                continue
            try:
                rows.append(ManifestRow(
                    image_path=record["image_path"].strip(),
                    patient_id=record["patient_id"].strip(),
                    side=record["side"].strip().lower(),
                    age_years=_as_int(record["age_years"]),
                    sex=record["sex"].strip().lower(),
                    label=_as_int(record["label"]),
                ))
                lines.append(line)
            except ValidationError as e:
                reasons = ", ".join(
                    f"{'.'.join(str(loc) for loc in err['loc'])}: {err['msg']}" for err in e.errors()
                )
                offenders.append((line, reasons))

        if offenders:
            raise ManifestParseError(str(path), offenders)

        duplicates = self._find_duplicates(rows, lines)
        if duplicates:
            raise DuplicateJointError(str(path), duplicates)

        logger.info(f"Manifiesto {path.name} cargado con {len(rows)} articulaciones.")
        return Manifest(rows=rows)

    @staticmethod
    def _find_duplicates(rows: List[ManifestRow], lines: List[int]) -> List[Tuple[int, str]]:
        first_seen: Dict[Tuple[str, Side], int] = {}
        duplicates: List[Tuple[int, str]] = []
        for row, line in zip(rows, lines):
            if row.key in first_seen:
                duplicates.append((
                    line,
                    f"articulación duplicada ({row.patient_id}, {row.side.value}), "
                    f"ya presente en la línea {first_seen[row.key]}",
                ))
            else:
                first_seen[row.key] = line
        return duplicates


def load_manifest(path: Union[str, Path]) -> Manifest:
    """Atajo para cargar un manifiesto CSV con el cargador por defecto."""
    return ManifestCSVLoader().load(Path(path))


def write_manifest(manifest: Manifest, path: Union[str, Path]) -> None:
    """Escribe el manifiesto como CSV con la cabecera estándar."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    df = pd.DataFrame(
        [
            {
                "image_path": row.image_path,
                "patient_id": row.patient_id,
                "side": row.side.value,
                "age_years": row.age_years,
                "sex": row.sex.value,
                "label": int(row.label),
            }
            for row in manifest.rows
        ],
        columns=MANIFEST_COLUMNS,
    )
    df.to_csv(path, index=False, lineterminator="\n")
    logger.debug(f"Manifiesto escrito en {path} con {len(df)} filas.")


def resolve_image_path(manifest_path: Union[str, Path], row: ManifestRow) -> Path:
    """Ruta de la imagen de una fila; las rutas relativas cuelgan del directorio del manifiesto."""
    image_path = Path(row.image_path)
    if image_path.is_absolute():
        return image_path
    return Path(manifest_path).parent / image_path
