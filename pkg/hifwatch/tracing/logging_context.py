"""Logging context for attributing records to a run, a record and a pipeline stage.

Usage:
    ```python
    from hifwatch.tracing import LoggingContext

    with LoggingContext({"command": "detect", "record": digest[:12]}):
        with LoggingContext({"stage": "havok"}):
            logger.info("extracting forcing")  # carries command, record and stage
    ```

Contexts nest: inner values extend (and override) outer ones. Storage uses
contextvars, so concurrent records processed in different threads or tasks
never see each other's context.
"""

import logging
from contextvars import ContextVar
from typing import Any, Dict, Optional

_logging_context: ContextVar[Dict[str, Any]] = ContextVar('logging_context', default={})

# context key -> attribute name on the record's extra_attrs
_ATTRIBUTE_NAMES = {
    "command": "run.command",
    "record": "run.record",
    "stage": "pipeline.stage",
    "seed": "run.seed",
}


class LoggingContextFilter(logging.Filter):
    """Copies the active context onto ``record.extra_attrs``.

    Installed on the root handlers by ``setup_logging()``.
    """

    def filter(self, record: logging.LogRecord) -> bool:
        context = _logging_context.get()
        if context:
            if not hasattr(record, 'extra_attrs'):
                record.extra_attrs = {}
            for key, value in context.items():
                if value is None:
                    continue
                record.extra_attrs[_ATTRIBUTE_NAMES.get(key, key)] = value
        return True


class LoggingContext:
    """Context manager setting logging context metadata for the enclosed block."""

    def __init__(self, context: Optional[Dict[str, Any]] = None, **values: Any):
        self.context = {**(context or {}), **values}
        self.token = None

    def __enter__(self):
        merged_context = {**_logging_context.get(), **self.context}
        self.token = _logging_context.set(merged_context)
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if self.token is not None:
            _logging_context.reset(self.token)
        return False


def get_current_logging_context() -> Dict[str, Any]:
    return _logging_context.get().copy()


def clear_logging_context():
    _logging_context.set({})


def install_logging_context_filter(logger: Optional[logging.Logger] = None):
    """Install the context filter on every handler of ``logger`` (root by default).

    Filters go on handlers, not loggers: logger filters do not apply to records
    propagated from child loggers.
    """
    if logger is None:
        logger = logging.getLogger()
    context_filter = LoggingContextFilter()
    for handler in logger.handlers:
        if any(isinstance(f, LoggingContextFilter) for f in handler.filters):
            continue
        handler.addFilter(context_filter)


__all__ = [
    'LoggingContext',
    'LoggingContextFilter',
    'get_current_logging_context',
    'clear_logging_context',
    'install_logging_context_filter',
]
