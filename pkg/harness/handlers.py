import logging
from collections import defaultdict
from typing import Dict, List, Set

from event_bus import BaseEventHandler
from models import (
    EpochCompletedEvent,
    EpochRecord,
    ErrorEvent,
    Event,
    EventType,
    FoldCompletedEvent,
    FoldStartedEvent,
)


logger = logging.getLogger(__name__)


class CurveRecorder(BaseEventHandler):
    """
    Acumula las curvas de pérdida y precisión por época de cada miembro, por fold.
    """

    def __init__(self, name: str = "CurveRecorder") -> None:
        super().__init__(name)
        self._curves: Dict[int, Dict[str, List[EpochRecord]]] = defaultdict(lambda: defaultdict(list))

    @property
    def supported_events(self) -> Set[EventType]:
        return {EventType.EPOCH_COMPLETED}

    def handle(self, event: Event) -> None:
        if not isinstance(event, EpochCompletedEvent):
            return
        self._curves[event.fold][event.member].append(EpochRecord(
            epoch=event.epoch,
            train_loss=event.train_loss,
            train_accuracy=event.train_accuracy,
            val_loss=event.val_loss,
            val_accuracy=event.val_accuracy,
        ))

    def curves(self, fold: int) -> Dict[str, List[EpochRecord]]:
        return {member: list(records) for member, records in self._curves.get(fold, {}).items()}


class TrainingProgressLogger(BaseEventHandler):
    """Escribe en el log el progreso publicado por el bucle de entrenamiento."""

    def __init__(self, name: str = "TrainingProgressLogger") -> None:
        super().__init__(name)

    @property
    def supported_events(self) -> Set[EventType]:
        return {EventType.FOLD_STARTED, EventType.EPOCH_COMPLETED, EventType.FOLD_COMPLETED, EventType.ERROR}

    def handle(self, event: Event) -> None:
        if isinstance(event, FoldStartedEvent):
            self.logger.info(
                f"Fold {event.fold}: {event.n_train} casos de entrenamiento, {event.n_test} de test, "
                f"miembros {event.members}."
            )
        elif isinstance(event, EpochCompletedEvent):
            self.logger.info(
                f"Fold {event.fold} [{event.member}] época {event.epoch}: "
                f"loss={event.train_loss:.4f} acc={event.train_accuracy:.3f} | "
                f"val_loss={event.val_loss:.4f} val_acc={event.val_accuracy:.3f}"
            )
        elif isinstance(event, FoldCompletedEvent):
            auc = "undefined" if event.auc is None else f"{event.auc:.4f}"
            self.logger.info(f"Fold {event.fold} completado: AUC del ensamble {auc}.")
        elif isinstance(event, ErrorEvent):
            self.logger.error(f"Error en {event.source} ({event.error_type}): {event.message}")
