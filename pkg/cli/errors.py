from pydantic import ValidationError

from cli.exceptions import OverwriteRefusedError
from data import ManifestParseError, PgmFormatError
from models import InvalidInputError


EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_OVERWRITE = 3
EXIT_RUNTIME = 4


def exit_code_for(error: BaseException) -> int:
    """Código de salida asociado a una excepción."""
    if isinstance(error, (ValidationError, InvalidInputError, ManifestParseError, PgmFormatError, FileNotFoundError)):
        return EXIT_VALIDATION
    if isinstance(error, OverwriteRefusedError):
        return EXIT_OVERWRITE
    # NumericError, TrainingAbortedError, CheckpointError y el resto de JointNetError
    return EXIT_RUNTIME
