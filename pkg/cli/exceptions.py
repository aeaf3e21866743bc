from models.exceptions import JointNetError


class CliError(JointNetError):
    """Excepción base para errores de la línea de comandos."""
    pass


class OverwriteRefusedError(CliError):
    """Excepción lanzada cuando el directorio de salida ya tiene contenido y no se indicó --force."""

    def __init__(self, path: str) -> None:
        self.path = path
        super().__init__(f"El directorio de salida '{path}' no está vacío; use --force para sobrescribirlo.")
