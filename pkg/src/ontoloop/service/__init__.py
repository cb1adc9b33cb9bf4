"""Runnable system: event-sourced store, HTTP API, command line."""
from ontoloop.service.store import EventStore
from ontoloop.service.api import create_app
from ontoloop.service.serialize import record_from_payload, record_payload

__all__ = [
    "EventStore",
    "create_app",
    "record_from_payload",
    "record_payload",
]
