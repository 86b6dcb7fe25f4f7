"""Logger configuration settings.

Environment Variables:
    LOG_LEVEL: Log level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
    LOG_FILE_ENABLED: Enable file logging (true/false)
    LOG_FILE_PATH: Path to log file (default: logs/hifwatch.log)
    LOG_FILE_MAX_BYTES: Max file size before rotation (default: 1048576)
    LOG_FILE_BACKUP_COUNT: Number of backup files (default: 3)
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Union

from .app_settings import VALID_LOG_LEVELS
from .base_settings import BaseSettings, EnvParser, SettingsError


@dataclass(frozen=True)
class LoggerSettings(BaseSettings):
    """Console and rotating-file logging configuration."""

    log_level: str = "INFO"
    file_logging: bool = False
    file_path: Optional[str] = None
    file_max_bytes: int = 1_048_576  # 1 MB
    file_backup_count: int = 3

    @classmethod
    def from_env(
        cls,
        prefix: str = "",
        load_dotenv: bool = True,
        dotenv_paths: Optional[List[Union[str, Path]]] = None,
        **overrides
    ) -> "LoggerSettings":
        """Create logger settings from the ``LOG_*`` environment variables."""
        cls._load_dotenv_if_requested(load_dotenv, dotenv_paths)
        settings = {
            "log_level": EnvParser.get_env("LOG_LEVEL", default="INFO").upper(),
            "file_logging": EnvParser.get_env("LOG_FILE_ENABLED", default=False, env_type=bool),
            "file_path": EnvParser.get_env("LOG_FILE_PATH"),
            "file_max_bytes": EnvParser.get_env("LOG_FILE_MAX_BYTES", default=1_048_576, env_type=int),
            "file_backup_count": EnvParser.get_env("LOG_FILE_BACKUP_COUNT", default=3, env_type=int),
        }
        settings.update(overrides)
        return cls(**settings)

    def validate(self) -> None:
        if self.log_level.upper() not in VALID_LOG_LEVELS:
            raise SettingsError(f"Log level must be one of: {', '.join(VALID_LOG_LEVELS)}")
        if self.file_max_bytes <= 0:
            raise SettingsError("file_max_bytes must be positive")
        if self.file_backup_count < 0:
            raise SettingsError("file_backup_count must be >= 0")
