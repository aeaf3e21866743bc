"""
Persistencia de resultados: un JSON por fold, el informe agregado y la tabla de AUC por fold.
"""

import logging
from pathlib import Path
from typing import Dict, List, Optional, Union

import pandas as pd

from models import CVReport, FoldResult, InvalidInputError


logger = logging.getLogger(__name__)

CV_REPORT_FILE = "cv_report.json"
FOLD_AUC_FILE = "fold_auc.csv"
UNDEFINED = "undefined"


def fold_result_path(out_dir: Path, fold: int) -> Path:
    return Path(out_dir) / f"fold_{fold}.json"


def write_fold_result(result: FoldResult, out_dir: Path) -> Path:
    path = fold_result_path(out_dir, result.fold)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(result.model_dump_json(indent=2), encoding="utf-8")
    logger.debug(f"Resultado del fold {result.fold} escrito en {path}.")
    return path


def read_fold_result(path: Path) -> FoldResult:
    return FoldResult.model_validate_json(Path(path).read_text(encoding="utf-8"))


def fold_auc_table(report: CVReport) -> pd.DataFrame:
    """Una fila por fold y una columna por modelo (el ensamble y, si hay varios, cada miembro)."""
    table: Dict[str, List[Optional[float]]] = {"fold": [fold.fold for fold in report.folds]}
    table[report.model] = list(report.fold_auc)
    if len(report.members) > 1:
        for member in report.members:
            table[member] = list(report.member_fold_auc.get(member, []))
    return pd.DataFrame(table)


def write_cv_report(report: CVReport, out_dir: Path) -> List[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    report_path = out_dir / CV_REPORT_FILE
    report_path.write_text(report.model_dump_json(indent=2), encoding="utf-8")
    auc_path = out_dir / FOLD_AUC_FILE
    fold_auc_table(report).to_csv(auc_path, index=False, na_rep=UNDEFINED, lineterminator="\n")
    logger.info(f"Informe de validación cruzada escrito en {report_path}.")
    return [report_path, auc_path]


def read_cv_report(path: Union[str, Path]) -> CVReport:
    """Lee `cv_report.json` desde el archivo o desde su directorio de ejecución."""
    path = Path(path)
    if path.is_dir():
        path = path / CV_REPORT_FILE
    return CVReport.model_validate_json(path.read_text(encoding="utf-8"))


def read_fold_auc(path: Union[str, Path], column: Optional[str] = None) -> List[float]:
    """
    Lee una columna de AUC por fold. Sin `column` se toma la primera columna distinta de 'fold'.
    """
    df = pd.read_csv(path, na_values=[UNDEFINED])
    candidates = [c for c in df.columns if c != "fold"]
    if not candidates:
        raise InvalidInputError("read_fold_auc", f"{path} no contiene columnas de AUC")
    name = column or candidates[0]
    if name not in df.columns:
        raise InvalidInputError("read_fold_auc", f"columna '{name}' ausente en {path}; disponibles: {candidates}")
    values = df[name]
    if values.isna().any():
        raise InvalidInputError("read_fold_auc", f"la columna '{name}' de {path} contiene AUC indefinidas")
    return [float(v) for v in values]
