"""
Bucle de entrenamiento de un fold: entrena cada miembro del ensamble con AdamW sobre la
entropía cruzada, registra las curvas por época y evalúa el ensamble en el conjunto de test.
"""

import logging
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from autodiff import AdamW, AdamWHyper, Tensor, backward, softmax, softmax_cross_entropy
from data import ArrayBatchSource, PatchStore
from event_bus import EventBus, EventHandlerRegistry
from harness.datasets import case_arrays, check_normalization, training_arrays
from harness.exceptions import LeakageError, TrainingAbortedError
from harness.handlers import CurveRecorder
from harness.results import write_fold_result
from metrics import roc_auc
from models import (
    BackboneSpec,
    CaseResult,
    EpochCompletedEvent,
    ErrorEvent,
    FoldCompletedEvent,
    FoldPlan,
    FoldResult,
    FoldStartedEvent,
    InvalidInputError,
    Manifest,
    NumericError,
    TrainConfig,
)
from nets import EnsembleMember, EnsembleModel, build_ensemble, mean_probability, save_checkpoint


logger = logging.getLogger(__name__)


def member_streams(seed: int, fold: int, count: int) -> List[np.random.SeedSequence]:
    return [np.random.SeedSequence([seed, fold, index]) for index in range(count)]


def fold_auc(labels: np.ndarray, probs: np.ndarray) -> Optional[float]:
    """AUC de un conjunto de test; None si sólo contiene una clase."""
    if np.unique(labels).size < 2:
        return None
    return roc_auc(probs, labels)[0]


class FoldTrainer:
    """
    Entrena y evalúa un fold. Los miembros se entrenan de forma secuencial y cada uno es dueño
    exclusivo de sus parámetros durante su bucle.
    """

    def __init__(
            self,
            config: TrainConfig,
            specs: Sequence[BackboneSpec],
            event_bus: Optional[EventBus] = None,
            out_dir: Optional[Path] = None,
    ) -> None:
        self.config = config
        self.specs = list(specs)
        self.event_bus = event_bus or EventBus(EventHandlerRegistry())
        self.out_dir = Path(out_dir) if out_dir is not None else None
        self.dtype = np.dtype(config.precision)

    def run(self, manifest: Manifest, patches: PatchStore, plan: FoldPlan, fold: int) -> FoldResult:
        test_patients = plan.test_patients(fold)
        train_patients = plan.train_patients(fold)
        overlap = sorted(test_patients & train_patients)
        if overlap:
            raise LeakageError(fold, overlap)

        recorder = CurveRecorder(f"CurveRecorder.fold{fold}")
        self.event_bus.registry.register_handler(recorder)
        try:
            result = self._run(manifest, patches, fold, train_patients, test_patients, recorder)
        except (TrainingAbortedError, NumericError) as e:
            self.event_bus.publish(ErrorEvent(
                source=f"fold {fold}",
                error_type=type(e).__name__,
                message=str(e),
            ))
            raise
        finally:
            self.event_bus.registry.unregister_handler(recorder)
        return result

    def _run(
            self,
            manifest: Manifest,
            patches: PatchStore,
            fold: int,
            train_patients: set,
            test_patients: set,
            recorder: CurveRecorder,
    ) -> FoldResult:
        config = self.config
        patient_index = {pid: i for i, pid in enumerate(manifest.patients())}
        train_rows = manifest.rows_for(train_patients)
        test_rows = manifest.rows_for(test_patients)
        check_normalization(patches, config.normalize)

        train_x, train_aux, train_y = training_arrays(
            train_rows, patches, patient_index, config.augment, config.seed, fold, self.dtype
        )
        test_x, test_aux, test_y = case_arrays(test_rows, patches, self.dtype)
        if len(train_y) < 2:
            raise InvalidInputError(
                "train_fold", f"el fold {fold} tiene {len(train_y)} casos de entrenamiento; se necesitan al menos 2"
            )

        model = build_ensemble(
            self.specs,
            member_streams(config.seed, fold, len(self.specs)),
            dtype=self.dtype,
            use_age=config.use_age,
            use_sex=config.use_sex,
        )
        self.event_bus.publish(FoldStartedEvent(
            fold=fold,
            n_train=len(train_y),
            n_test=len(test_y),
            members=model.member_names,
        ))

        source = ArrayBatchSource(train_x, train_aux, train_y, config.batch_size, seed=config.seed, fold=fold)
        for member in model.members:
            self.train_member(member, source, (test_x, test_aux, test_y), fold)

        member_probs = model.predict_members(test_x, test_aux)
        ensemble_probs = mean_probability(np.stack(list(member_probs.values())))

        cases = [
            CaseResult(
                case_id=row.case_id,
                patient_id=row.patient_id,
                side=row.side,
                label=int(row.label),
                probability=float(ensemble_probs[i]),
                member_probabilities={name: float(probs[i]) for name, probs in member_probs.items()},
            )
            for i, row in enumerate(test_rows)
        ]

        checkpoint = None
        if self.out_dir is not None:
            checkpoint = save_checkpoint(
                model,
                self.out_dir / "checkpoints" / f"fold_{fold}.jnt",
                provenance={"seed": config.seed, "fold": fold, "train_config": config.model_dump(mode="json")},
            )

        result = FoldResult(
            fold=fold,
            cases=cases,
            curves=recorder.curves(fold),
            checkpoint=str(checkpoint) if checkpoint is not None else None,
        )
        if self.out_dir is not None:
            write_fold_result(result, self.out_dir)

        self.event_bus.publish(FoldCompletedEvent(
            fold=fold,
            auc=fold_auc(test_y, ensemble_probs),
            member_auc={name: fold_auc(test_y, probs) for name, probs in member_probs.items()},
        ))
        return result

    def train_member(
            self,
            member: EnsembleMember,
            source: ArrayBatchSource,
            validation: Tuple[np.ndarray, np.ndarray, np.ndarray],
            fold: int,
    ) -> None:
        """Entrena un miembro durante exactamente `config.epochs` épocas, sin parada temprana."""
        config = self.config
        optimizer = AdamW(member.parameters(), AdamWHyper(
            lr=config.lr,
            beta1=config.beta1,
            beta2=config.beta2,
            eps=config.eps,
            weight_decay=config.weight_decay,
        ))

        for epoch in range(config.epochs):
            loss_sum = 0.0
            correct = 0
            seen = 0
            for batch_index, (x, aux, y) in enumerate(source.batches(epoch)):
                try:
                    logits = member.logits(x, aux, training=True)
                    loss = softmax_cross_entropy(logits, y)
                    value = float(loss.data)
                    if not np.isfinite(value):
                        raise NumericError("softmax_cross_entropy", "pérdida no finita")
                    optimizer.zero_grad()
                    backward(loss, parameters=optimizer.params)
                    optimizer.step()
                except NumericError as e:
                    raise TrainingAbortedError(fold, member.name, epoch, batch_index, str(e)) from e

                loss_sum += value * len(y)
                correct += int(np.sum(np.argmax(logits.data, axis=1) == y))
                seen += len(y)

            val_loss, val_accuracy = self.evaluate_member(member, *validation)
            self.event_bus.publish(EpochCompletedEvent(
                fold=fold,
                member=member.name,
                epoch=epoch,
                train_loss=loss_sum / seen if seen else float("nan"),
                train_accuracy=correct / seen if seen else 0.0,
                val_loss=val_loss,
                val_accuracy=val_accuracy,
            ))

    @staticmethod
    def evaluate_member(member: EnsembleMember, x: np.ndarray, aux: np.ndarray, y: np.ndarray) -> Tuple[float, float]:
        """Pérdida y precisión en modo evaluación sobre el conjunto de test del fold."""
        if len(y) == 0:
            return float("nan"), 0.0
        logits = member.logits(x, aux, training=False)
        loss = softmax_cross_entropy(Tensor(logits.data.astype(np.float64)), y)
        accuracy = float(np.mean(np.argmax(softmax(logits), axis=1) == y))
        return float(loss.data), accuracy


def train_fold(
        manifest: Manifest,
        patches: PatchStore,
        plan: FoldPlan,
        fold: int,
        config: TrainConfig,
        specs: Sequence[BackboneSpec],
        event_bus: Optional[EventBus] = None,
        out_dir: Optional[Path] = None,
) -> FoldResult:
    """Entrena el ensamble de un fold y devuelve sus probabilidades de test y curvas."""
    return FoldTrainer(config, specs, event_bus=event_bus, out_dir=out_dir).run(manifest, patches, plan, fold)
