from enum import Enum


class EventType(str, Enum):
    """Enum para los tipos de eventos que publica el bucle de entrenamiento."""
    FOLD_STARTED = "FOLD_STARTED"
    EPOCH_COMPLETED = "EPOCH_COMPLETED"
    FOLD_COMPLETED = "FOLD_COMPLETED"
    ERROR = "ERROR"


class Side(str, Enum):
    """Lado de la articulación sacroilíaca."""
    LEFT = "left"
    RIGHT = "right"

    @property
    def code(self) -> int:
        """Código numérico estable usado para derivar flujos aleatorios."""
        return 0 if self is Side.LEFT else 1

    @property
    def short(self) -> str:
        return "L" if self is Side.LEFT else "R"


class Sex(str, Enum):
    """Sexo del paciente."""
    FEMALE = "female"
    MALE = "male"


class Label(int, Enum):
    """Etiqueta de la articulación. La clase positiva es la inflamación activa."""
    HEALTHY = 0
    ACTIVE_INFLAMMATION = 1


class BackboneKind(str, Enum):
    """Tipos de backbone convolucional soportados."""
    DENSE = "dense"
    RESIDUAL = "residual"
    PLAIN = "plain"


class CurveKind(str, Enum):
    """Tipos de curva emitidos por el módulo de métricas."""
    ROC = "roc"
    PR = "pr"
    SENS_SPEC_VS_THRESHOLD = "sens_spec_vs_threshold"
    F1_RECALL_VS_THRESHOLD = "f1_recall_vs_threshold"
    PPV_NPV_VS_PREVALENCE = "ppv_npv_vs_prevalence"


class Alternative(str, Enum):
    """Hipótesis alternativa de una prueba pareada."""
    TWO_SIDED = "two_sided"
    GREATER = "greater"
    LESS = "less"


class PValueMethod(str, Enum):
    """Método con el que se obtuvo un p-valor."""
    EXACT = "exact"
    APPROXIMATE = "approximate"
