"""Rotating run log.

The file keeps what the console drops: every record carries the run context
(command, pipeline stage, record digest, seed) as trailing ``key=value`` pairs,
so a log line can be traced to the stage and record it came from.
"""

import logging
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Optional, Union

FILE_LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"


class RunContextFormatter(logging.Formatter):
    """Appends the record's ``extra_attrs`` in key order."""

    def format(self, record: logging.LogRecord) -> str:
        line = super().format(record)
        attrs = getattr(record, "extra_attrs", None)
        if not attrs:
            return line
        return line + " | " + " ".join(f"{key}={attrs[key]}" for key in sorted(attrs))


def create_file_handler(
    file_path: Union[str, Path],
    level: int,
    max_bytes: int = 1_048_576,
    backup_count: int = 3,
) -> Optional[RotatingFileHandler]:
    """Rotating handler on ``file_path``, or None when the file cannot be opened.

    Parent directories are created. A failure is logged as a warning and the
    run carries on with console logging only.
    """
    path = Path(file_path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        handler = RotatingFileHandler(path, maxBytes=max_bytes, backupCount=backup_count, encoding="utf-8")
    except OSError as e:
        logging.getLogger(__name__).warning(f"run log {path} unavailable, logging to console only: {e}")
        return None
    handler.setLevel(level)
    handler.setFormatter(RunContextFormatter(FILE_LOG_FORMAT))
    return handler
