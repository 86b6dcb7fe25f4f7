"""
run_config.py

The run configuration shared by every command: one YAML document with the
sections ``sim``, ``schedule``, ``havok``, ``s2g`` and ``detector``.

Sources, in increasing precedence:
- dataclass defaults
- the YAML file (or a bundled preset addressed by name)
- ``HIFWATCH_<SECTION>__<FIELD>`` environment variables; nested sections
  continue with ``__`` (``HIFWATCH_SIM__INRUSH__PEAK_MULTIPLE``)

Unknown keys from any source raise ``ConfigKeyError`` with the dotted path.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

import yaml

from hifwatch.tracing.logger import get_module_logger
from hifwatch.wavesim.models import EventSchedule

from .base_settings import BaseSettings, ConfigKeyError, DotEnvLoader, SettingsError
from .detector_settings import DetectorConfig
from .sim_settings import SimConfig

logger = get_module_logger()

ENV_PREFIX = "HIFWATCH_"
SECTIONS = ("sim", "schedule", "havok", "s2g", "detector")
PRESETS = ("case_a", "case_b")


@dataclass(frozen=True)
class RunConfig(BaseSettings):
    """Simulation, schedule and detection settings of one run.

    The top-level ``havok`` and ``s2g`` sections end up inside ``detector``.
    Unless set explicitly, the detector inherits the system frequency and the
    expected sample rate from ``sim``.
    """

    sim: SimConfig = field(default_factory=SimConfig)
    schedule: EventSchedule = field(default_factory=EventSchedule)
    detector: DetectorConfig = field(default_factory=DetectorConfig)

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any], key_path: str = "") -> "RunConfig":
        for key in data:
            if key not in SECTIONS:
                raise ConfigKeyError(str(key))
        sections = {name: data.get(name) or {} for name in SECTIONS}
        for name, section in sections.items():
            if not isinstance(section, Mapping):
                raise SettingsError(f"{name}: expected a mapping, got {type(section).__name__}")
        sim = SimConfig.from_mapping(sections["sim"], key_path="sim")
        schedule = EventSchedule.from_mapping(sections["schedule"], key_path="schedule")

        detector_raw = dict(sections["detector"])
        for nested in ("havok", "s2g"):
            if nested in detector_raw:
                raise ConfigKeyError(f"detector.{nested}", f"detector.{nested}: '{nested}' is a top-level section")
            detector_raw[nested] = sections[nested]
        detector_raw.setdefault("system_frequency", sim.system_frequency)
        detector_raw.setdefault("expected_sample_rate", sim.sample_rate)
        detector = DetectorConfig.from_mapping(detector_raw, key_path="detector")
        return cls(sim=sim, schedule=schedule, detector=detector)

    def with_seed(self, seed: Optional[int]) -> "RunConfig":
        if seed is None:
            return self
        return self.merge(sim=self.sim.merge(rng_seed=int(seed)))

    def as_dict(self) -> Dict[str, Any]:
        detector = self.detector.as_dict()
        havok = detector.pop("havok")
        s2g = detector.pop("s2g")
        return {
            "sim": self.sim.as_dict(),
            "schedule": self.schedule.as_dict(),
            "havok": havok,
            "s2g": s2g,
            "detector": detector,
        }


def resolve_config_path(source: Union[str, Path]) -> Path:
    """Path of a config file, or of the bundled preset named ``source``."""
    path = Path(source)
    if path.exists():
        return path
    name = str(source)
    if name in PRESETS:
        return Path(str(resources.files("hifwatch.config").joinpath("presets", f"{name}.yaml")))
    raise SettingsError(f"config file not found: {source} (presets: {', '.join(PRESETS)})")


def read_config_document(source: Union[str, Path]) -> Dict[str, Any]:
    path = resolve_config_path(source)
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as e:
        raise SettingsError(f"{path}: invalid YAML: {e}") from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise SettingsError(f"{path}: top level must be a mapping")
    return data


def apply_env_overrides(data: Dict[str, Any], environ: Optional[Mapping[str, str]] = None) -> Dict[str, Any]:
    """Copy of ``data`` with every ``HIFWATCH_<SECTION>__<FIELD>`` variable applied."""
    environ = os.environ if environ is None else environ
    merged = {name: dict(value) if isinstance(value, Mapping) else value for name, value in data.items()}
    for name in sorted(environ):
        if not name.startswith(ENV_PREFIX):
            continue
        parts = [p.lower() for p in name[len(ENV_PREFIX):].split("__")]
        if len(parts) < 2 or not all(parts):
            continue
        if parts[0] not in SECTIONS or parts[0] == "schedule":
            raise ConfigKeyError(".".join(parts), f"{name}: no overridable section '{parts[0]}'")
        target = merged
        for part in parts[:-1]:
            current = target.get(part)
            target[part] = dict(current) if isinstance(current, Mapping) else {}
            target = target[part]
        target[parts[-1]] = environ[name]
        logger.debug(f"config override {'.'.join(parts)} from {name}")
    return merged


def load_run_config(
    source: Union[str, Path, None] = None,
    environ: Optional[Mapping[str, str]] = None,
    load_dotenv: bool = False,
) -> RunConfig:
    """Read a run configuration file or preset and apply environment overrides.

    Raises:
        SettingsError: missing file, invalid YAML or invalid values.
        ConfigKeyError: an unknown key in the file or in an override.
    """
    if load_dotenv:
        DotEnvLoader.load_dotenv_files()
    data = {} if source is None else read_config_document(source)
    return RunConfig.from_mapping(apply_env_overrides(data, environ))
