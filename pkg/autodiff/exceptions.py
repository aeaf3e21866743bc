from typing import Tuple

from models.exceptions import JointNetError


class AutodiffError(JointNetError):
    """Excepción base para errores del motor de diferenciación."""
    pass


class InvalidShapeError(AutodiffError, ValueError):
    """Excepción lanzada cuando las formas de los operandos no son compatibles."""

    def __init__(self, operation: str, reason: str, *shapes: Tuple[int, ...]) -> None:
        self.operation = operation
        self.reason = reason
        self.shapes = shapes
        detail = f" (formas: {', '.join(str(s) for s in shapes)})" if shapes else ""
        super().__init__(f"Forma inválida en '{operation}': {reason}{detail}")


class GraphCycleError(AutodiffError):
    """Excepción lanzada cuando el grafo de operaciones contiene un ciclo."""

    def __init__(self, node: str) -> None:
        self.node = node
        super().__init__(f"Ciclo detectado en el grafo de operaciones en el nodo '{node}'.")
