from typing import List, Optional

from models.exceptions import JointNetError


class HarnessError(JointNetError):
    """Excepción base para errores de entrenamiento y validación cruzada."""
    pass


class TrainingAbortedError(HarnessError):
    """Excepción lanzada cuando la pérdida o un gradiente dejan de ser finitos."""

    def __init__(self, fold: int, member: str, epoch: int, batch: int, reason: str) -> None:
        self.fold = fold
        self.member = member
        self.epoch = epoch
        self.batch = batch
        self.reason = reason
        super().__init__(
            f"Entrenamiento abortado en fold {fold}, miembro '{member}', época {epoch}, lote {batch}: {reason}"
        )


class LeakageError(HarnessError):
    """Excepción lanzada cuando un paciente aparece a la vez en entrenamiento y test de un fold."""

    def __init__(self, fold: Optional[int], patients: List[str], reason: str = "pacientes en train y test") -> None:
        self.fold = fold
        self.patients = patients
        shown = ", ".join(patients[:5])
        super().__init__(f"Fuga a nivel de paciente en el fold {fold}: {reason} ({shown})")
