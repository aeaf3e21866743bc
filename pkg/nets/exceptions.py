from models.exceptions import JointNetError


class NetsError(JointNetError):
    """Excepción base para errores de las redes."""
    pass


class CheckpointError(NetsError):
    """Excepción lanzada cuando un checkpoint no puede leerse o escribirse."""

    def __init__(self, path: str, reason: str) -> None:
        self.path = path
        self.reason = reason
        super().__init__(f"Checkpoint inválido '{path}': {reason}")
