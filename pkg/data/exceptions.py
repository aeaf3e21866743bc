from typing import List, Tuple

from models.exceptions import JointNetError


class DataError(JointNetError):
    """Excepción base para errores de lectura y escritura de datos."""
    pass


class PgmFormatError(DataError):
    """Excepción lanzada cuando un archivo PGM no respeta el formato binario P5."""

    def __init__(self, path: str, reason: str) -> None:
        self.path = path
        self.reason = reason
        super().__init__(f"Archivo PGM inválido '{path}': {reason}")


class ManifestParseError(DataError):
    """Excepción lanzada cuando el manifiesto contiene filas mal formadas."""

    def __init__(self, path: str, offenders: List[Tuple[int, str]]) -> None:
        self.path = path
        self.offenders = offenders
        detail = "; ".join(f"línea {line}: {reason}" for line, reason in offenders)
        super().__init__(f"Manifiesto inválido '{path}': {detail}")


class DuplicateJointError(ManifestParseError):
    """Excepción lanzada cuando una articulación (paciente, lado) aparece más de una vez."""
    pass
