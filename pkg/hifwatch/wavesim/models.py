"""Event, schedule and waveform types of the simulator."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Mapping, Optional, Tuple, Union

import numpy as np

from hifwatch.config.base_settings import BaseSettings, ConfigKeyError, SettingsError, coerce_value


class RlKind(str, Enum):
    MOTOR_START = "motor_start"
    LOAD_SWITCH = "load_switch"


@dataclass(frozen=True)
class HifParams(BaseSettings):
    """Arc branch of a high-impedance fault: constant resistance in series with a
    time-varying arc conductance following the Kizilcay equation.

    Defaults keep the secondary-side fault current below a motor start peak on
    the default 4.16 kV secondary.
    """

    R0: float = 40.0
    tau: float = 0.4e-3
    u0: float = 300.0
    r0: float = 0.5
    g_init: float = 1e-3

    def validate(self) -> None:
        for name in ("R0", "tau", "u0", "r0", "g_init"):
            if not getattr(self, name) > 0:
                raise SettingsError(f"HifParams.{name} must be > 0")

    @property
    def kind(self) -> str:
        return "hif"


@dataclass(frozen=True)
class RlParams(BaseSettings):
    """Series R-L branch switched onto the secondary bus."""

    R: float = 5.0
    L: float = 0.02
    kind: RlKind = RlKind.LOAD_SWITCH

    def validate(self) -> None:
        if not self.R > 0:
            raise SettingsError("RlParams.R must be > 0")
        if self.L < 0:
            raise SettingsError("RlParams.L must be >= 0")


EventParams = Union[HifParams, RlParams]


@dataclass(frozen=True)
class ScheduledEvent(BaseSettings):
    """One event: it connects at ``onset`` and opens at the first current zero
    after ``onset + duration`` (both seconds from the start of the record)."""

    onset: float = 0.0
    duration: float = 0.05
    params: EventParams = field(default_factory=HifParams)

    def validate(self) -> None:
        if self.onset < 0:
            raise SettingsError("event onset must be >= 0")
        if not self.duration > 0:
            raise SettingsError("event duration must be > 0")

    @property
    def end(self) -> float:
        return self.onset + self.duration

    @property
    def is_hif(self) -> bool:
        return isinstance(self.params, HifParams)

    @property
    def kind(self) -> str:
        return self.params.kind if self.is_hif else self.params.kind.value

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any], key_path: str = "") -> "ScheduledEvent":
        # params carrying a `kind` key describe an R-L branch, anything else an arc
        allowed = {"onset", "duration", "params"}
        for key in data:
            if key not in allowed:
                raise ConfigKeyError(f"{key_path}.{key}" if key_path else str(key))
        raw_params = data.get("params") or {}
        params_path = f"{key_path}.params" if key_path else "params"
        if isinstance(raw_params, (HifParams, RlParams)):
            params = raw_params
        elif not isinstance(raw_params, Mapping):
            raise SettingsError(f"{params_path}: expected a mapping")
        elif "kind" in raw_params:
            params = RlParams.from_mapping(raw_params, key_path=params_path)
        else:
            params = HifParams.from_mapping(raw_params, key_path=params_path)
        kwargs: Dict[str, Any] = {"params": params}
        for name in ("onset", "duration"):
            if name in data:
                kwargs[name] = coerce_value(float, data[name], f"{key_path}.{name}")
        return cls(**kwargs)

    def as_dict(self) -> Dict[str, Any]:
        params = self.params.as_dict()
        if isinstance(self.params, RlParams):
            params["kind"] = self.params.kind.value
        return {"onset": self.onset, "duration": self.duration, "params": params}


@dataclass(frozen=True)
class EventSchedule(BaseSettings):
    """Events of one record, kept sorted by onset (stable for equal onsets)."""

    events: Tuple[ScheduledEvent, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(sorted(self.events, key=lambda e: e.onset)))
        super().__post_init__()

    @property
    def hif_events(self) -> Tuple[ScheduledEvent, ...]:
        return tuple(e for e in self.events if e.is_hif)

    @property
    def benign_events(self) -> Tuple[ScheduledEvent, ...]:
        return tuple(e for e in self.events if not e.is_hif)

    def union(self, other: "EventSchedule") -> "EventSchedule":
        return EventSchedule(events=self.events + other.events)

    def check_fits(self, duration: float, sample_rate: float) -> None:
        """Raise ``ScheduleError`` when an event falls outside ``[0, duration]``."""
        from hifwatch.errors import ScheduleError

        tolerance = 0.5 / sample_rate
        for event in self.events:
            if event.onset >= duration:
                raise ScheduleError(f"event at {event.onset} s starts after the record ends ({duration} s)")
            if event.end > duration + tolerance:
                raise ScheduleError(
                    f"event at {event.onset} s lasting {event.duration} s runs past the record end ({duration} s)"
                )

    def as_dict(self) -> Dict[str, Any]:
        return {"events": [e.as_dict() for e in self.events]}


@dataclass
class Waveform:
    """A sampled record: named channels on a uniform time grid plus optional labels.

    ``labels`` marks samples inside a scheduled fault interval (1) or not (0).
    """

    sample_rate: float
    t0: float
    channels: Dict[str, np.ndarray]
    labels: Optional[np.ndarray] = None

    def __post_init__(self):
        if not self.sample_rate > 0:
            raise ValueError("sample_rate must be > 0")
        if "i_primary" not in self.channels:
            raise ValueError("a waveform needs an 'i_primary' channel")
        lengths = {name: len(values) for name, values in self.channels.items()}
        if len(set(lengths.values())) != 1:
            raise ValueError(f"channels differ in length: {lengths}")
        if self.labels is not None and len(self.labels) != self.n_samples:
            raise ValueError("labels length differs from channel length")

    @property
    def n_samples(self) -> int:
        return len(self.channels["i_primary"])

    @property
    def i_primary(self) -> np.ndarray:
        return self.channels["i_primary"]

    @property
    def time(self) -> np.ndarray:
        return self.t0 + np.arange(self.n_samples) / self.sample_rate

    @property
    def duration(self) -> float:
        return self.n_samples / self.sample_rate

    def scaled(self, factor: float) -> "Waveform":
        """Copy with every current channel multiplied by ``factor``."""
        channels = {
            name: values * factor if name.startswith("i_") else values.copy()
            for name, values in self.channels.items()
        }
        labels = None if self.labels is None else self.labels.copy()
        return Waveform(self.sample_rate, self.t0, channels, labels)


def sample_index(seconds: float, sample_rate: float) -> int:
    """Index of the sample at ``seconds`` from the start of a record."""
    return int(math.floor(seconds * sample_rate + 0.5))
