from datetime import datetime
from typing import Dict, Optional

from pydantic import BaseModel, Field

from models.enums import EventType


class Event(BaseModel):
    """
    Clase base para todos los eventos del bucle de entrenamiento.
    """
    type: EventType
    timestamp: datetime = Field(default_factory=datetime.now)


class FoldStartedEvent(Event):
    """
    Indica el inicio del entrenamiento de un fold.
    """
    type: EventType = EventType.FOLD_STARTED
    fold: int
    n_train: int
    n_test: int
    members: list[str]


class EpochCompletedEvent(Event):
    """
    Resumen de una época de un miembro del ensamble.
    """
    type: EventType = EventType.EPOCH_COMPLETED
    fold: int
    member: str
    epoch: int
    train_loss: float
    train_accuracy: float
    val_loss: float
    val_accuracy: float


class FoldCompletedEvent(Event):
    """
    Indica que un fold terminó y fue evaluado sobre su partición de test.
    """
    type: EventType = EventType.FOLD_COMPLETED
    fold: int
    auc: Optional[float] = None
    member_auc: Dict[str, Optional[float]] = Field(default_factory=dict)


class ErrorEvent(Event):
    """
    Evento para reportar errores durante el entrenamiento.
    """
    type: EventType = EventType.ERROR
    source: str
    error_type: str
    message: str
    details: Optional[Dict] = None
