import logging

from event_bus.exceptions import HandlerNotFoundError
from event_bus.handlers import EventHandlerRegistry
from models import Event


logger = logging.getLogger(__name__)


class EventBus:
    """
    Event Bus síncrono que distribuye los eventos de progreso del entrenamiento.
    Un manejador que falla se registra en el log y nunca interrumpe al publicador.
    """

    def __init__(self, registry: EventHandlerRegistry) -> None:
        self.registry = registry
        self._events_published = 0
        self._handler_errors = 0

    def publish(self, event: Event) -> None:
        """Publica un evento y lo entrega a los manejadores registrados."""
        self._events_published += 1

        try:
            handlers = self.registry.get_handlers(event.type)
        except HandlerNotFoundError:
            logger.debug(f"No hay manejadores registrados para el evento '{event.type.value}'.")
            return

        for handler in handlers:
            try:
                handler.handle(event)
            except Exception as e:
                self._handler_errors += 1
                logger.error(
                    f"Error en manejador '{handler.handler_name}' para evento '{event.type.value}': {e}",
                    exc_info=True,
                )

    def get_stats(self) -> dict:
        """Retorna estadísticas del Event Bus."""
        return {
            "events_published": self._events_published,
            "handler_errors": self._handler_errors,
        }
