"""
Validación cruzada completa: plan de folds por paciente, entrenamiento de cada fold
(opcionalmente en paralelo) y agregación de métricas.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from data import PatchStore
from event_bus import EventBus, EventHandlerRegistry
from harness.folds import assert_no_leakage, make_folds
from harness.handlers import TrainingProgressLogger
from harness.results import write_cv_report
from harness.trainer import fold_auc, train_fold
from metrics import DEFAULT_RESAMPLES, basic_metrics, bootstrap_ci, confusion
from models import BackboneSpec, CVReport, FoldResult, InvalidInputError, Manifest, TrainConfig
from nets import member_names


logger = logging.getLogger(__name__)


def ensemble_name(names: Sequence[str]) -> str:
    return "+".join(names)


def _train_fold_worker(
        manifest: Manifest,
        patches: PatchStore,
        plan,
        fold: int,
        config: TrainConfig,
        specs: List[BackboneSpec],
        out_dir: Optional[Path],
) -> FoldResult:
    registry = EventHandlerRegistry()
    registry.register_handler(TrainingProgressLogger())
    return train_fold(manifest, patches, plan, fold, config, specs, event_bus=EventBus(registry), out_dir=out_dir)


def aggregate(
        folds: List[FoldResult],
        names: List[str],
        threshold: float,
        seed: int = 0,
        resamples: int = DEFAULT_RESAMPLES,
) -> CVReport:
    """AUC por fold, media con intervalo bootstrap sobre folds y métricas agrupadas al umbral."""
    aucs = [fold_auc(f.labels(), f.probabilities()) for f in folds]
    member_aucs = {
        name: [fold_auc(f.labels(), f.member_probabilities(name)) for f in folds]
        for name in names
    }
    defined = [a for a in aucs if a is not None]
    if len(defined) < len(aucs):
        logger.warning(f"{len(aucs) - len(defined)} folds con una sola clase quedan fuera de la AUC media.")
    if len(defined) < 2:
        raise InvalidInputError("run_cv", "se requieren al menos 2 folds con ambas clases para agregar la AUC")

    pooled_probs = np.concatenate([f.probabilities() for f in folds])
    pooled_labels = np.concatenate([f.labels() for f in folds])
    table = confusion(pooled_probs, pooled_labels, threshold)

    return CVReport(
        model=ensemble_name(names),
        members=names,
        folds=folds,
        fold_auc=aucs,
        member_fold_auc=member_aucs,
        mean_auc=float(np.mean(defined)),
        auc_ci=bootstrap_ci(defined, resamples=resamples, seed=seed),
        threshold=threshold,
        pooled_confusion=table,
        pooled_metrics=basic_metrics(table),
    )


def run_cv(
        manifest: Manifest,
        patches: PatchStore,
        config: TrainConfig,
        specs: Sequence[BackboneSpec],
        k: int = 10,
        out_dir: Optional[Path] = None,
        jobs: int = 1,
        event_bus: Optional[EventBus] = None,
        resamples: int = DEFAULT_RESAMPLES,
) -> CVReport:
    """
    Entrena todos los folds y agrega sus resultados. Con `jobs` > 1 los folds se ejecutan en
    procesos separados; los resultados se ordenan siempre por índice de fold.
    """
    specs = list(specs)
    if not specs:
        raise InvalidInputError("run_cv", "se requiere al menos un backbone")
    patches.require(manifest)
    plan = make_folds(manifest, k, config.seed)
    assert_no_leakage(plan, manifest)

    out_dir = Path(out_dir) if out_dir is not None else None
    logger.info(f"Validación cruzada de {k} folds con {len(specs)} miembros y {jobs} procesos.")

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            futures = [
                executor.submit(_train_fold_worker, manifest, patches, plan, fold, config, specs, out_dir)
                for fold in range(k)
            ]
            folds = [future.result() for future in futures]
    else:
        bus = event_bus or EventBus(EventHandlerRegistry())
        folds = [train_fold(manifest, patches, plan, fold, config, specs, event_bus=bus, out_dir=out_dir)
                 for fold in range(k)]
        stats = bus.get_stats()
        logger.info(f"{stats['events_published']} eventos de entrenamiento publicados.")
        if stats["handler_errors"]:
            logger.warning(f"{stats['handler_errors']} errores en manejadores de eventos durante la validación cruzada.")

    report = aggregate(folds, member_names(specs), config.threshold.probability, config.seed, resamples)
    logger.info(
        f"AUC media {report.mean_auc:.4f} (IC 95 %: {report.auc_ci.lo:.4f}, {report.auc_ci.hi:.4f}) "
        f"sobre {len(folds)} folds."
    )
    if out_dir is not None:
        write_cv_report(report, out_dir)
    return report
