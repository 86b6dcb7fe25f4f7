"""Application-level settings: name, version, environment and log level."""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Union

from .base_settings import BaseSettings, SettingsError

VALID_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass(frozen=True)
class AppSettings(BaseSettings):
    """Identity of the running tool, echoed into run manifests and log records."""

    app_name: str = "hifwatch"
    version: str = "0.1.0"
    environment: str = "prod"
    log_level: str = "INFO"

    @classmethod
    def from_env(
        cls,
        prefix: str = "",
        load_dotenv: bool = True,
        dotenv_paths: Optional[List[Union[str, Path]]] = None,
        **overrides
    ) -> "AppSettings":
        """Create app settings from ``APP_NAME``, ``ENVIRONMENT`` and ``LOG_LEVEL``.

        The version always comes from the installed package.
        """
        from hifwatch import __version__

        cls._load_dotenv_if_requested(load_dotenv, dotenv_paths)
        environment = overrides.get("environment") or os.getenv("ENVIRONMENT", "prod").lower()
        default_level = "DEBUG" if environment in ("dev", "development") else "INFO"
        return cls(
            app_name=overrides.get("app_name") or os.getenv("APP_NAME", "hifwatch"),
            version=overrides.get("version") or __version__,
            environment=environment,
            log_level=(overrides.get("log_level") or os.getenv("LOG_LEVEL", default_level)).upper(),
        )

    def validate(self) -> None:
        if not self.app_name or not self.app_name.strip():
            raise SettingsError("App name cannot be empty")
        if self.log_level.upper() not in VALID_LOG_LEVELS:
            raise SettingsError(f"Log level must be one of: {', '.join(VALID_LOG_LEVELS)}")

    @property
    def is_development(self) -> bool:
        return self.environment.lower() in ("dev", "development")
