"""
base_settings.py

Base settings class shared by every hifwatch configuration section.

Settings are frozen dataclasses. They can be built three ways:
- directly, with keyword arguments (validated in ``__post_init__``)
- from a mapping (a section of a YAML run configuration), with unknown keys rejected
- from environment variables, one variable per field under a prefix

Key Features:
- Automatic .env file loading with configurable search paths (python-dotenv)
- Type-safe environment variable parsing with defaults
- Field-type driven conversion for nested sections, tuples and mappings
- Strict validation: an invalid object is never constructed
"""

from __future__ import annotations

import dataclasses
import os
import types
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Type, TypeVar, Union, get_args, get_origin, get_type_hints

from dotenv import load_dotenv

T = TypeVar('T')
S = TypeVar('S', bound='BaseSettings')


class SettingsError(Exception):
    """Base exception for settings-related errors."""
    pass


class EnvironmentVariableError(SettingsError):
    """Raised when required environment variables are missing or invalid."""
    pass


class ConfigKeyError(SettingsError):
    """Raised when a configuration source carries a key no section defines."""

    def __init__(self, key_path: str, message: Optional[str] = None):
        self.key_path = key_path
        super().__init__(message or f"unknown configuration key: {key_path}")


class DotEnvLoader:
    """Handles .env file discovery and loading."""

    @staticmethod
    def load_dotenv_files(
        search_paths: Optional[List[Union[str, Path]]] = None,
        filename: str = ".env"
    ) -> bool:
        """Load environment variables from .env files.

        Args:
            search_paths: Directories to search for .env files. If None, searches
                          the current directory and the project root.
            filename: Name of the env file (default: ".env")

        Returns:
            True if at least one .env file was loaded, False otherwise
        """
        if search_paths is None:
            search_paths = DotEnvLoader._get_default_search_paths()

        loaded = False
        for path in search_paths:
            env_file = Path(path) / filename
            if env_file.exists():
                load_dotenv(env_file, override=False)  # Don't override existing env vars
                loaded = True

        return loaded

    @staticmethod
    def _get_default_search_paths() -> List[Path]:
        paths = [Path.cwd()]
        cwd = Path.cwd()
        for parent in [cwd, *cwd.parents]:
            if (parent / "pyproject.toml").exists():
                if parent != cwd:
                    paths.append(parent)
                break
        return paths


class EnvParser:
    """Utilities for parsing environment variables with type conversion."""

    @staticmethod
    def get_env(
        *names: str,
        default: Any = None,
        required: bool = False,
        env_type: Type[T] = str
    ) -> Optional[T]:
        """Get environment variable with type conversion and fallback.

        Args:
            *names: Environment variable names to try in order
            default: Default value if no env var is found
            required: If True, raise EnvironmentVariableError if no value found
            env_type: Type to convert the value to (str, int, float, bool, list)

        Returns:
            Parsed environment variable value or default

        Raises:
            EnvironmentVariableError: If required=True and no value found
        """
        value = None
        for name in names:
            value = os.getenv(name)
            if value is not None:
                break

        if value is None:
            if required:
                raise EnvironmentVariableError(
                    f"Required environment variable not found: {', '.join(names)}"
                )
            return default

        return EnvParser.convert(value, env_type, names[0])

    @staticmethod
    def convert(value: str, target_type: Type[T], var_name: str) -> T:
        """Convert a string value to ``target_type``."""
        if target_type == str:
            return value  # type: ignore
        elif target_type == bool:
            return value.strip().lower() in ('true', '1', 'yes', 'on')  # type: ignore
        elif target_type in (int, float):
            try:
                return target_type(value)  # type: ignore
            except ValueError:
                raise EnvironmentVariableError(
                    f"Invalid {target_type.__name__} value for {var_name}: {value}"
                )
        elif target_type == list:
            return [item.strip() for item in value.split(',') if item.strip()]  # type: ignore
        else:
            try:
                return target_type(value)  # type: ignore
            except (ValueError, TypeError):
                raise EnvironmentVariableError(
                    f"Cannot convert {var_name} value '{value}' to {target_type.__name__}"
                )


def _strip_optional(annotation: Any) -> tuple[Any, bool]:
    """Return (inner type, is_optional) for ``X | None`` annotations."""
    origin = get_origin(annotation)
    if origin in (Union, types.UnionType):
        args = [a for a in get_args(annotation) if a is not type(None)]
        if len(args) == 1:
            return args[0], True
    return annotation, False


def coerce_value(annotation: Any, value: Any, key_path: str) -> Any:
    """Coerce a raw (YAML or env string) value to a dataclass field annotation."""
    inner, optional = _strip_optional(annotation)
    if value is None:
        if optional:
            return None
        raise SettingsError(f"{key_path}: value is required")

    if isinstance(inner, type) and issubclass(inner, BaseSettings):
        if isinstance(value, inner):
            return value
        if not isinstance(value, Mapping):
            raise SettingsError(f"{key_path}: expected a mapping, got {type(value).__name__}")
        return inner.from_mapping(value, key_path=key_path)

    origin = get_origin(inner)
    if origin is tuple:
        args = get_args(inner)
        if isinstance(value, str):
            value = [item.strip() for item in value.split(',') if item.strip()]
        if not isinstance(value, (list, tuple)):
            raise SettingsError(f"{key_path}: expected a sequence")
        if len(args) == 2 and args[1] is Ellipsis:
            return tuple(coerce_value(args[0], v, f"{key_path}[{i}]") for i, v in enumerate(value))
        if len(value) != len(args):
            raise SettingsError(f"{key_path}: expected {len(args)} items, got {len(value)}")
        return tuple(coerce_value(a, v, f"{key_path}[{i}]") for i, (a, v) in enumerate(zip(args, value)))

    if origin in (dict, Mapping) or inner is dict:
        key_type, value_type = get_args(inner) or (str, Any)
        if isinstance(value, str):
            pairs = [item.split(':', 1) for item in value.split(',') if item.strip()]
            value = {k.strip(): v.strip() for k, v in pairs}
        if not isinstance(value, Mapping):
            raise SettingsError(f"{key_path}: expected a mapping")
        return {
            coerce_value(key_type, k, f"{key_path}.{k}"): coerce_value(value_type, v, f"{key_path}.{k}")
            for k, v in value.items()
        }

    if inner is Any:
        return value
    if isinstance(inner, type) and isinstance(value, str) and inner is not str:
        return EnvParser.convert(value, inner, key_path)
    if inner is float and isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if inner is int and isinstance(value, float) and value.is_integer():
        return int(value)
    if isinstance(inner, type) and not isinstance(value, inner):
        try:
            return inner(value)
        except (TypeError, ValueError):
            raise SettingsError(f"{key_path}: cannot interpret {value!r} as {inner.__name__}")
    return value


@dataclass(frozen=True)
class BaseSettings:
    """Base class for configuration sections.

    Subclasses define their fields as dataclass fields with defaults and
    override ``validate()``. Construction runs validation; an invalid value
    raises ``SettingsError`` so that no invalid settings object ever exists.
    """

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        """Validate configuration values.

        Override this method to add custom validation logic.
        Raise SettingsError or subclass for validation failures.
        """
        pass

    @classmethod
    def field_types(cls) -> Dict[str, Any]:
        hints = get_type_hints(cls)
        return {f.name: hints[f.name] for f in dataclasses.fields(cls) if f.init}

    @classmethod
    def from_mapping(cls: Type[S], data: Mapping[str, Any], key_path: str = "") -> S:
        """Build settings from a mapping, rejecting keys the class does not define."""
        types_by_name = cls.field_types()
        kwargs: Dict[str, Any] = {}
        for key, raw in data.items():
            path = f"{key_path}.{key}" if key_path else str(key)
            if key not in types_by_name:
                raise ConfigKeyError(path)
            kwargs[key] = coerce_value(types_by_name[key], raw, path)
        try:
            return cls(**kwargs)
        except SettingsError as e:
            if key_path and not str(e).startswith(key_path):
                raise type(e)(f"{key_path}: {e}") from e
            raise

    @classmethod
    def from_env(
        cls: Type[S],
        prefix: str = "",
        load_dotenv: bool = True,
        dotenv_paths: Optional[List[Union[str, Path]]] = None,
        **overrides
    ) -> S:
        """Create an instance from ``<PREFIX><FIELD>`` environment variables.

        Args:
            prefix: Variable name prefix, e.g. ``"HIFWATCH_SIM__"``
            load_dotenv: Whether to load .env files before reading env vars
            dotenv_paths: Custom paths to search for .env files
            **overrides: Direct value overrides (bypass environment variables)
        """
        cls._load_dotenv_if_requested(load_dotenv, dotenv_paths)
        values: Dict[str, Any] = {}
        for name in cls.field_types():
            raw = os.getenv(f"{prefix}{name.upper()}")
            if raw is not None:
                values[name] = raw
        values.update(overrides)
        return cls.from_mapping(values, key_path=prefix.rstrip('_').lower())

    def as_dict(self) -> Dict[str, Any]:
        """Return configuration as a plain dictionary (nested sections included)."""
        result = {}
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if hasattr(value, 'as_dict'):
                result[f.name] = value.as_dict()
            elif isinstance(value, tuple):
                result[f.name] = [v.as_dict() if hasattr(v, 'as_dict') else v for v in value]
            elif isinstance(value, Enum):
                result[f.name] = value.value
            elif isinstance(value, dict):
                result[f.name] = dict(value)
            else:
                result[f.name] = value
        return result

    def merge(self: S, **overrides) -> S:
        """Create a new instance with specified overrides."""
        return dataclasses.replace(self, **overrides)

    @classmethod
    def _load_dotenv_if_requested(
        cls,
        load_dotenv: bool,
        dotenv_paths: Optional[List[Union[str, Path]]]
    ) -> bool:
        if load_dotenv:
            return DotEnvLoader.load_dotenv_files(dotenv_paths)
        return False
