from models.exceptions import JointNetError


class StatsError(JointNetError):
    """Excepción base para errores de las pruebas estadísticas."""
    pass


class DegenerateSampleError(StatsError, ValueError):
    """Excepción lanzada cuando la muestra no permite definir la prueba (p. ej. todas las diferencias nulas)."""

    def __init__(self, test: str, reason: str) -> None:
        self.test = test
        self.reason = reason
        super().__init__(f"Muestra degenerada para '{test}': {reason}")


class DegenerateMarginalsError(StatsError, ValueError):
    """Excepción lanzada cuando el acuerdo esperado por azar es 1 y kappa no está definido."""

    def __init__(self, p_expected: float) -> None:
        self.p_expected = p_expected
        super().__init__(f"Marginales degenerados: acuerdo esperado = {p_expected}")
