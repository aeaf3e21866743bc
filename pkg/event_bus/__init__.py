"""
Event Bus package: publicación síncrona de eventos de progreso del entrenamiento.
"""

from .exceptions import (
    EventBusError,
    HandlerNotFoundError,
    HandlerRegistrationError,
)
from .handlers import (
    IEventHandler,
    EventHandlerRegistry,
    BaseEventHandler,
)
from .event_bus import EventBus

__all__ = [
    # Exceptions
    "EventBusError",
    "HandlerNotFoundError",
    "HandlerRegistrationError",
    # Handlers
    "IEventHandler",
    "EventHandlerRegistry",
    "BaseEventHandler",
    # Event Bus
    "EventBus",
]
