"""Configuration sections of hifwatch.

The run configuration loader lives in ``hifwatch.config.run_config``; it
depends on the simulator's schedule types and is imported from there.
"""
from .base_settings import (
    BaseSettings,
    ConfigKeyError,
    DotEnvLoader,
    EnvironmentVariableError,
    EnvParser,
    SettingsError,
)
from .app_settings import AppSettings
from .logger_settings import LoggerSettings
from .sim_settings import InrushParams, SimConfig
from .havok_settings import ForcingMode, HavokConfig, MedianRule
from .s2g_settings import S2gConfig
from .detector_settings import BaselineTooShortError, DetectorConfig

__all__ = [
    "BaseSettings",
    "SettingsError",
    "EnvironmentVariableError",
    "ConfigKeyError",
    "EnvParser",
    "DotEnvLoader",
    "AppSettings",
    "LoggerSettings",
    "InrushParams",
    "SimConfig",
    "ForcingMode",
    "MedianRule",
    "HavokConfig",
    "S2gConfig",
    "BaselineTooShortError",
    "DetectorConfig",
]
