"""Logging setup and per-run logging context."""

from .logger import (
    AppMetadataFilter,
    flush_logging,
    get_last_logging_config,
    get_logger,
    get_module_logger,
    setup_logging,
)
from .logging_context import (
    LoggingContext,
    LoggingContextFilter,
    clear_logging_context,
    get_current_logging_context,
    install_logging_context_filter,
)

__all__ = [
    "AppMetadataFilter",
    "setup_logging",
    "get_logger",
    "get_module_logger",
    "get_last_logging_config",
    "flush_logging",
    "LoggingContext",
    "LoggingContextFilter",
    "clear_logging_context",
    "get_current_logging_context",
    "install_logging_context_filter",
]
