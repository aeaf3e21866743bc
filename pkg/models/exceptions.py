from typing import Optional


class JointNetError(Exception):
    """Excepción base para todos los errores del pipeline."""
    pass


class InvalidInputError(JointNetError, ValueError):
    """Excepción lanzada cuando una operación recibe entradas fuera de su contrato."""

    def __init__(self, operation: str, reason: str) -> None:
        self.operation = operation
        self.reason = reason
        super().__init__(f"Entrada inválida en '{operation}': {reason}")


class NumericError(JointNetError, ArithmeticError):
    """Excepción lanzada cuando aparecen valores no finitos en un cálculo."""

    def __init__(self, operation: str, reason: str, parameter: Optional[str] = None) -> None:
        self.operation = operation
        self.reason = reason
        self.parameter = parameter
        message = f"Error numérico en '{operation}': {reason}"
        if parameter:
            message += f" (parámetro '{parameter}')"
        super().__init__(message)
