"""Centralized logging utilities for hifwatch.

Capabilities:
 - One-time global logging initialization triggered from an entrypoint (the CLI)
   using settings or environment variables.
 - Module-level lightweight accessors (`get_logger`, `get_module_logger`) that do not
   force global initialization at import time.
 - Override support: callers can pass `level` to `setup_logging` to override
   environment / settings derived values (e.g. a `--log-level` flag).
 - Optional file logging with rotation (disabled by default).

Environment variables (used only if explicit params and settings are not provided):
 LOG_LEVEL                -> root log level (default: INFO)
 LOG_FILE_ENABLED=true    -> enable file logging (default: false)
 LOG_FILE_PATH=logs/hifwatch.log
 LOG_FILE_MAX_BYTES=1048576
 LOG_FILE_BACKUP_COUNT=3

Re-calling `setup_logging` with `force=True` reconfigures the handlers.
"""

from __future__ import annotations

import inspect
import logging
import os
import sys
from typing import Any, Optional, Union

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"

_logger_initialized = False
_LAST_CONFIG: dict = {}


class AppMetadataFilter(logging.Filter):
    """Adds the tool name and version to every record's ``extra_attrs``."""

    def __init__(self, app_name: str, app_version: Optional[str] = None):
        super().__init__()
        self.app_name = app_name
        self.app_version = app_version

    def filter(self, record: logging.LogRecord) -> bool:
        if not hasattr(record, 'extra_attrs'):
            record.extra_attrs = {}
        record.extra_attrs['app.name'] = self.app_name
        if self.app_version:
            record.extra_attrs['app.version'] = self.app_version
        return True


def _resolve_level(level: Union[str, int, None]) -> int:
    if isinstance(level, int):
        return level
    if isinstance(level, str):
        return getattr(logging, level.upper(), logging.INFO)
    return logging.INFO


def setup_logging(
    app_name: Optional[str] = None,
    app_version: Optional[str] = None,
    name: Optional[str] = None,
    level: Optional[Union[str, int]] = None,
    app_settings: Optional[Any] = None,
    logger_settings: Optional[Any] = None,
    *,
    file_logging: Optional[bool] = None,
    file_path: Optional[str] = None,
    file_max_bytes: Optional[int] = None,
    file_backup_count: Optional[int] = None,
    force: bool = False,
) -> logging.Logger:
    """Initialize (or reconfigure) global logging and return a module logger.

    Precedence for the log level:
        explicit `level` > logger_settings.log_level > app_settings.log_level > LOG_LEVEL env > INFO
    File logging is enabled by (in precedence order):
        explicit `file_logging` | logger_settings.file_logging | env LOG_FILE_ENABLED | False

    Args:
        app_name: Tool name attached to records (default: app_settings.app_name, APP_NAME, "hifwatch").
        app_version: Tool version attached to records.
        name: Logger name to return (defaults to the caller's module).
        level: Override log level (str/int). Highest precedence.
        app_settings: Optional AppSettings instance.
        logger_settings: Optional LoggerSettings instance.
        file_logging: Explicitly enable/disable file logging.
        file_path: Path to log file (default: logs/<app_name>.log).
        file_max_bytes: Rotate at this size.
        file_backup_count: Number of rotated backups to keep.
        force: If True, reconfigure even if already initialized.

    Returns:
        logging.Logger: A logger scoped to the caller / provided name.
    """
    global _logger_initialized, _LAST_CONFIG

    if app_name is None:
        app_name = getattr(app_settings, "app_name", None) or os.getenv("APP_NAME") or "hifwatch"
    if app_version is None:
        app_version = getattr(app_settings, "version", None) or os.getenv("APP_VERSION")

    if level is None:
        if logger_settings is not None:
            level = getattr(logger_settings, "log_level", None)
        if level is None and app_settings is not None:
            level = getattr(app_settings, "log_level", None)
        if level is None:
            level = os.getenv("LOG_LEVEL", "INFO")
    numeric_level = _resolve_level(level)

    if file_logging is None:
        if logger_settings is not None:
            file_logging = bool(getattr(logger_settings, "file_logging", False))
        else:
            file_logging = os.getenv("LOG_FILE_ENABLED", "false").lower() in {"1", "true", "yes", "on"}
    if file_path is None:
        file_path = getattr(logger_settings, "file_path", None) or os.getenv("LOG_FILE_PATH") \
            or os.path.join("logs", f"{app_name}.log")
    if file_max_bytes is None:
        file_max_bytes = getattr(logger_settings, "file_max_bytes", None) \
            or int(os.getenv("LOG_FILE_MAX_BYTES", "1048576"))
    if file_backup_count is None:
        backups = getattr(logger_settings, "file_backup_count", None)
        file_backup_count = backups if backups is not None else int(os.getenv("LOG_FILE_BACKUP_COUNT", "3"))

    new_config = {
        "level": numeric_level,
        "file_logging": file_logging,
        "file_path": file_path,
        "file_max_bytes": file_max_bytes,
        "file_backup_count": file_backup_count,
        "app_name": app_name,
        "app_version": app_version,
    }

    if not _logger_initialized or force:
        console_handler = logging.StreamHandler(sys.stdout)
        handlers: list[logging.Handler] = [console_handler]

        if file_logging:
            from .handlers.file_handler import create_file_handler
            file_handler = create_file_handler(
                file_path=file_path,
                level=numeric_level,
                max_bytes=file_max_bytes,
                backup_count=file_backup_count,
            )
            if file_handler:
                handlers.append(file_handler)

        logging.basicConfig(level=numeric_level, format=LOG_FORMAT, handlers=handlers, force=True)

        from .logging_context import install_logging_context_filter
        install_logging_context_filter()

        root_logger = logging.getLogger()
        app_metadata_filter = AppMetadataFilter(app_name, app_version)
        for handler in root_logger.handlers:
            if not any(isinstance(f, AppMetadataFilter) for f in handler.filters):
                handler.addFilter(app_metadata_filter)

        # numerical stack and plotting libraries are chatty at DEBUG
        for noisy in ["matplotlib", "numba", "urllib3", "PIL"]:
            logging.getLogger(noisy).setLevel(logging.WARNING)

        _logger_initialized = True
        _LAST_CONFIG = new_config
        root_logger.debug(f"Logging initialized: level={logging.getLevelName(numeric_level)}, file_logging={file_logging}")

    if name is None:
        frame = inspect.currentframe().f_back
        name = frame.f_globals.get("__name__", "unknown")
    logger = logging.getLogger(name or "root")
    logger.setLevel(logging.NOTSET)  # inherit from the root logger
    return logger


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """Return a logger for `name` without forcing global initialization."""
    return logging.getLogger(name or "hifwatch")


def get_module_logger() -> logging.Logger:
    """Return a logger named after the calling module, without side-effects."""
    frame = inspect.currentframe().f_back
    return logging.getLogger(frame.f_globals.get("__name__", "unknown"))


def get_last_logging_config() -> dict:
    """Return the last applied logging configuration (useful in tests)."""
    return dict(_LAST_CONFIG)


def flush_logging() -> None:
    """Flush all root handlers; called by the CLI before exiting."""
    for handler in logging.getLogger().handlers:
        try:
            handler.flush()
        except Exception:
            pass
