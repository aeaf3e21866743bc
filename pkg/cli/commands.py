"""
Implementación de los subcomandos. Cada comando recibe la configuración resuelta y escribe
todas sus salidas en `config.out`.
"""

import json
import logging
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np
import pandas as pd
import yaml

from data import (
    PatchStore,
    load_manifest,
    load_patch_store,
    read_pgm,
    resolve_image_path,
    save_patch_stores,
)
from event_bus import EventBus, EventHandlerRegistry
from harness import (
    TrainingProgressLogger,
    evaluate_checkpoint,
    read_cv_report,
    read_fold_auc,
    run_cv,
)
from imgproc import Preprocessor
from metrics import UNDEFINED, basic_metrics, evaluate, write_eval_report
from models import (
    TOOL_NAME,
    TOOL_VERSION,
    ConfusionTable,
    CVReport,
    InvalidInputError,
    PairedSample,
    RunConfig,
)
from phantom import generate_dataset
from stats import chi_square_2x2, cohen_kappa, compare_models, summarize_auc, wilcoxon_signed_rank
from cli.exceptions import OverwriteRefusedError


logger = logging.getLogger(__name__)

RUN_CONFIG_FILE = "run_config.yaml"
PREP_LOG_FILE = "prep_log.csv"


# --- Directorio de ejecución ------------------------------------------------------------------

def prepare_output(config: RunConfig) -> Path:
    """Crea el directorio de salida; si ya tiene contenido exige --force."""
    out = Path(config.out)
    if out.exists() and any(out.iterdir()) and not config.force:
        raise OverwriteRefusedError(str(out))
    out.mkdir(parents=True, exist_ok=True)
    return out


def write_run_config(config: RunConfig, command: str) -> Path:
    """Escribe la configuración resuelta junto a las salidas."""
    data = config.model_dump(mode="json")
    data["clip_limit"] = float(config.clip_limit)
    data["tool"] = f"{TOOL_NAME} {TOOL_VERSION}"
    data["command"] = command
    path = Path(config.out) / RUN_CONFIG_FILE
    path.write_text(yaml.safe_dump(data, sort_keys=True, allow_unicode=True), encoding="utf-8")
    return path


def _require(value: Optional[str], option: str, command: str) -> Path:
    if not value:
        raise InvalidInputError(command, f"falta la opción --{option}")
    path = Path(value)
    if not path.exists():
        raise FileNotFoundError(f"No existe el archivo de --{option}: {path}")
    return path


# --- phantom ---------------------------------------------------------------------------------

def cmd_phantom(config: RunConfig) -> Path:
    spec = config.to_phantom_spec()
    out = Path(config.out)
    generate_dataset(spec, out)
    write_run_config(config, "phantom")
    return out / "manifest.csv"


# --- prep ------------------------------------------------------------------------------------

def cmd_prep(config: RunConfig) -> Path:
    manifest_path = _require(config.manifest, "manifest", "prep")
    template_path = _require(config.template, "template", "prep")
    out = Path(config.out)

    manifest = load_manifest(manifest_path)
    preprocessor = Preprocessor(read_pgm(template_path), config.patch_size, config.to_clahe_params())

    raw, normalized = PatchStore(intensity_normalized=False), PatchStore()
    log_rows = []
    for row in manifest.rows:
        pixels = read_pgm(resolve_image_path(manifest_path, row))
        result = preprocessor.process(pixels, row.patient_id, row.side)
        raw.add(result.raw)
        normalized.add(result.normalized)
        log_rows.append(result.match.model_dump(mode="json"))

    save_patch_stores(out, raw, normalized)
    pd.DataFrame(log_rows, columns=["patient_id", "side", "row_offset", "col_offset", "score"]).to_csv(
        out / PREP_LOG_FILE, index=False, lineterminator="\n"
    )
    write_run_config(config, "prep")
    logger.info(f"Preprocesadas {len(manifest)} articulaciones en {out}.")
    return out


# --- cv ---------------------------------------------------------------------------------------

def _load_patches(config: RunConfig, command: str) -> PatchStore:
    patches_path = _require(config.patches, "patches", command)
    return load_patch_store(patches_path, normalized=not config.no_normalize)


def cmd_cv(config: RunConfig) -> CVReport:
    manifest = load_manifest(_require(config.manifest, "manifest", "cv"))
    patches = _load_patches(config, "cv")
    specs = config.backbone_specs()
    if len(patches) and patches.side_length != config.patch_size:
        raise InvalidInputError(
            "cv",
            f"los parches miden {patches.side_length} px pero --patch-size es {config.patch_size}",
        )

    registry = EventHandlerRegistry()
    registry.register_handler(TrainingProgressLogger())
    bus = EventBus(registry)

    write_run_config(config, "cv")
    return run_cv(
        manifest,
        patches,
        config.to_train_config(),
        specs,
        k=config.folds,
        out_dir=Path(config.out),
        jobs=config.jobs,
        event_bus=bus,
        resamples=config.resamples,
    )


# --- eval -------------------------------------------------------------------------------------

def cmd_eval(config: RunConfig) -> Path:
    checkpoint = _require(config.checkpoint, "checkpoint", "eval")
    manifest = load_manifest(_require(config.manifest, "manifest", "eval"))
    patches = _load_patches(config, "eval")

    cases = evaluate_checkpoint(checkpoint, manifest, patches)
    threshold = config.resolved_threshold().probability
    report = evaluate(
        [case.probability for case in cases],
        [case.label for case in cases],
        threshold=threshold,
        prevalence_range=(config.prevalence_min, config.prevalence_max),
        prevalence_points=config.prevalence_points,
        seed=config.seed,
        resamples=config.resamples,
        case_ids=[case.case_id for case in cases],
    )
    write_run_config(config, "eval")
    write_eval_report(report, Path(config.out))
    logger.info(f"AUC {report.auc:.4f} con umbral de probabilidad {threshold}.")
    return Path(config.out)


# --- stats ------------------------------------------------------------------------------------

def parse_table(text: Optional[str], test: str) -> np.ndarray:
    """'40,10,5,45' -> tabla cuadrada por filas."""
    if not text:
        raise InvalidInputError(test, "falta la opción --table")
    try:
        values = [float(token) for token in text.split(",")]
    except ValueError:
        raise InvalidInputError(test, f"tabla mal formada: '{text}'")
    side = int(round(np.sqrt(len(values))))
    if side < 2 or side * side != len(values):
        raise InvalidInputError(test, f"la tabla debe tener k x k valores (k >= 2), recibidos {len(values)}")
    if any(v < 0 or not float(v).is_integer() for v in values):
        raise InvalidInputError(test, "los conteos deben ser enteros no negativos")
    return np.array(values).reshape(side, side)


def run_stats(config: RunConfig, test: str) -> Dict:
    if test == "kappa":
        result = cohen_kappa(parse_table(config.table, test)).model_dump(mode="json")
    elif test == "chi2":
        result = chi_square_2x2(parse_table(config.table, test)).model_dump(mode="json")
    elif test == "reader":
        table = parse_table(config.table, test)
        if table.shape != (2, 2):
            raise InvalidInputError(test, "la tabla del lector debe ser tn,fn,fp,tp")
        confusion = ConfusionTable.from_reader_crosstab(table.astype(int).tolist())
        result = {"test": "reader_metrics", "confusion": confusion.model_dump(),
                  "metrics": basic_metrics(confusion).model_dump()}
    elif test == "wilcoxon":
        a = read_fold_auc(_require(config.a, "a", test), config.column_a)
        b = read_fold_auc(_require(config.b, "b", test), config.column_b)
        if len(a) != len(b):
            raise InvalidInputError(test, f"las muestras tienen longitudes distintas ({len(a)} y {len(b)})")
        result = wilcoxon_signed_rank(PairedSample(a=a, b=b), config.alternative).model_dump(mode="json")
    else:
        raise InvalidInputError("stats", f"prueba desconocida '{test}'")
    return result


def cmd_stats(config: RunConfig, test: str) -> Dict:
    result = run_stats(config, test)
    text = json.dumps(result, indent=2, sort_keys=True)
    out = Path(config.out)
    (out / f"stats_{test}.json").write_text(text, encoding="utf-8")
    write_run_config(config, f"stats {test}")
    logger.info(f"Resultado de '{test}': {json.dumps(result, sort_keys=True)}")
    print(text)
    return result


# --- report -----------------------------------------------------------------------------------

def _fmt(value: Optional[float]):
    return UNDEFINED if value is None else value


def comparison_rows(runs: Dict[str, CVReport]) -> List[Dict]:
    rows = []
    for label, report in runs.items():
        aucs = [a for a in report.fold_auc if a is not None]
        mean, std = summarize_auc(aucs)
        metrics = report.pooled_metrics
        rows.append({
            "model": label,
            "mean_auc": mean,
            "std_auc": std,
            "ci_lo": report.auc_ci.lo,
            "ci_hi": report.auc_ci.hi,
            "sensitivity": _fmt(metrics.sensitivity),
            "specificity": _fmt(metrics.specificity),
            "ppv": _fmt(metrics.ppv),
            "npv": _fmt(metrics.npv),
        })
    return rows


def cmd_report(config: RunConfig) -> Path:
    if not config.runs:
        raise InvalidInputError("report", "falta la opción --runs")
    run_dirs = [Path(token.strip()) for token in config.runs.split(",") if token.strip()]

    runs: Dict[str, CVReport] = {}
    for run_dir in run_dirs:
        _require(str(run_dir), "runs", "report")
        report = read_cv_report(run_dir)
        runs[f"{run_dir.name}:{report.model}"] = report

    fold_auc: Dict[str, List[float]] = {}
    for label, report in runs.items():
        if any(a is None for a in report.fold_auc):
            logger.warning(f"'{label}' tiene folds sin AUC definida; queda fuera de las pruebas pareadas.")
            continue
        fold_auc[label] = list(report.fold_auc)
    lengths = {len(values) for values in fold_auc.values()}
    if len(lengths) > 1:
        raise InvalidInputError("report", f"las ejecuciones tienen distinto número de folds: {sorted(lengths)}")

    out = Path(config.out)
    pd.DataFrame(comparison_rows(runs)).to_csv(out / "comparison.csv", index=False, lineterminator="\n")
    tests = [
        {
            "model_a": c.model_a,
            "model_b": c.model_b,
            "statistic": c.result.statistic,
            "p_value": c.result.p_value,
            "n": c.result.n,
            "method": c.result.method.value,
        }
        for c in compare_models(fold_auc)
    ]
    pd.DataFrame(tests, columns=["model_a", "model_b", "statistic", "p_value", "n", "method"]).to_csv(
        out / "wilcoxon.csv", index=False, lineterminator="\n"
    )
    write_run_config(config, "report")
    logger.info(f"Comparación de {len(runs)} ejecuciones escrita en {out}.")
    return out
