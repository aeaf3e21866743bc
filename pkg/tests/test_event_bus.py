"""
Tests para el EventBus y el registro de manejadores.
"""

import pytest

from event_bus import (
    BaseEventHandler,
    EventBus,
    EventHandlerRegistry,
    HandlerNotFoundError,
    HandlerRegistrationError,
)
from harness import CurveRecorder
from models import (
    EpochCompletedEvent,
    ErrorEvent,
    EventType,
    FoldCompletedEvent,
    FoldStartedEvent,
)


class MockEventHandler(BaseEventHandler):
    """Handler de prueba que guarda los eventos recibidos."""

    def __init__(self, supported_event_types, name=None):
        super().__init__(name)
        self._supported_event_types = supported_event_types
        self.events_received = []

    @property
    def supported_events(self):
        return self._supported_event_types

    def handle(self, event):
        self.events_received.append(event)


class FaultyHandler(BaseEventHandler):
    """Handler que siempre falla."""

    @property
    def supported_events(self):
        return {EventType.EPOCH_COMPLETED}

    def handle(self, event):
        raise ValueError("Handler simulado que falla")


def epoch_event(fold=0, member="dense", epoch=0):
    return EpochCompletedEvent(
        fold=fold,
        member=member,
        epoch=epoch,
        train_loss=0.7,
        train_accuracy=0.5,
        val_loss=0.69,
        val_accuracy=0.55,
    )


class TestEventBus:
    """Tests para EventBus."""

    def setup_method(self):
        self.registry = EventHandlerRegistry()
        self.event_bus = EventBus(self.registry)

    def test_initialization(self):
        """Estado inicial del bus."""
        assert self.event_bus.get_stats() == {"events_published": 0, "handler_errors": 0}

    def test_publish_reaches_handlers_in_order(self):
        """Todos los manejadores registrados reciben el evento."""
        first = MockEventHandler({EventType.FOLD_STARTED}, "First")
        second = MockEventHandler({EventType.FOLD_STARTED}, "Second")
        self.registry.register_handler(first)
        self.registry.register_handler(second)

        event = FoldStartedEvent(fold=0, n_train=10, n_test=2, members=["dense"])
        self.event_bus.publish(event)

        assert first.events_received == [event]
        assert second.events_received == [event]

    def test_publish_without_handlers(self):
        """Publicar sin manejadores no falla."""
        self.event_bus.publish(FoldCompletedEvent(fold=1, auc=0.8))
        assert self.event_bus.get_stats()["events_published"] == 1

    def test_faulty_handler_does_not_stop_publisher(self):
        """Un manejador que falla se cuenta y no interrumpe al resto."""
        healthy = MockEventHandler({EventType.EPOCH_COMPLETED}, "Healthy")
        self.registry.register_handler(FaultyHandler())
        self.registry.register_handler(healthy)

        self.event_bus.publish(epoch_event())

        assert len(healthy.events_received) == 1
        assert self.event_bus.get_stats()["handler_errors"] == 1

    def test_error_event_type(self):
        """ErrorEvent lleva su tipo por defecto."""
        event = ErrorEvent(source="fold 0", error_type="NumericError", message="pérdida no finita")
        assert event.type == EventType.ERROR


class TestEventHandlerRegistry:
    """Tests para EventHandlerRegistry."""

    def setup_method(self):
        self.registry = EventHandlerRegistry()

    def test_register_and_unregister(self):
        """Registrar y desregistrar un manejador."""
        handler = MockEventHandler({EventType.FOLD_STARTED, EventType.FOLD_COMPLETED})
        self.registry.register_handler(handler)

        assert self.registry.get_handlers(EventType.FOLD_STARTED) == [handler]
        assert self.registry.get_handlers(EventType.FOLD_COMPLETED) == [handler]

        self.registry.unregister_handler(handler)
        with pytest.raises(HandlerNotFoundError):
            self.registry.get_handlers(EventType.FOLD_STARTED)

    def test_register_twice_is_idempotent(self):
        """El mismo manejador no se duplica."""
        handler = MockEventHandler({EventType.ERROR})
        self.registry.register_handler(handler)
        self.registry.register_handler(handler)
        assert len(self.registry.get_handlers(EventType.ERROR)) == 1

    def test_register_invalid_handler(self):
        """Un objeto que no implementa IEventHandler se rechaza."""
        with pytest.raises(HandlerRegistrationError):
            self.registry.register_handler(object())

    def test_register_handler_without_events(self):
        """Un manejador sin eventos soportados se rechaza."""
        with pytest.raises(HandlerRegistrationError):
            self.registry.register_handler(MockEventHandler(set(), "Empty"))

    def test_get_handlers_not_found(self):
        """Pedir manejadores de un evento sin registrar lanza HandlerNotFoundError."""
        with pytest.raises(HandlerNotFoundError):
            self.registry.get_handlers(EventType.ERROR)


class TestCurveRecorder:
    """Tests para el manejador que acumula las curvas de entrenamiento."""

    def test_records_epochs_per_fold_and_member(self):
        """Las épocas se agrupan por fold y miembro."""
        registry = EventHandlerRegistry()
        recorder = CurveRecorder()
        registry.register_handler(recorder)
        bus = EventBus(registry)

        bus.publish(epoch_event(fold=0, member="dense", epoch=0))
        bus.publish(epoch_event(fold=0, member="dense", epoch=1))
        bus.publish(epoch_event(fold=0, member="residual", epoch=0))
        bus.publish(epoch_event(fold=1, member="dense", epoch=0))

        curves = recorder.curves(0)
        assert sorted(curves) == ["dense", "residual"]
        assert [record.epoch for record in curves["dense"]] == [0, 1]
        assert len(recorder.curves(1)["dense"]) == 1
        assert recorder.curves(5) == {}
