from models.exceptions import JointNetError


class EventBusError(JointNetError):
    """Excepción base para errores relacionados con el Event Bus."""
    pass


class HandlerNotFoundError(EventBusError):
    """Excepción lanzada cuando ningún manejador atiende un tipo de evento."""

    def __init__(self, event_type: str) -> None:
        self.event_type = event_type
        super().__init__(f"No se encontró un manejador para el evento: {event_type}")


class HandlerRegistrationError(EventBusError):
    """Excepción lanzada cuando un manejador no puede registrarse."""

    def __init__(self, handler_name: str, reason: str) -> None:
        self.handler_name = handler_name
        self.reason = reason
        super().__init__(f"Error al registrar el manejador '{handler_name}': {reason}")
