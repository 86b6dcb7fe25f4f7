"""Simulation settings: source, transformer, steady load and measurement noise.

Electrical parameters of the source are primary-side quantities. Loads and
event branches are given on the transformer secondary; the simulator refers
them across the transformer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from .base_settings import BaseSettings, SettingsError


@dataclass(frozen=True)
class InrushParams(BaseSettings):
    """Energization inrush surrogate: decaying envelope with a 2nd-harmonic component.

    i(t) = A·exp(-(t - te)/decay_tau)·(cos ωt' + second_harmonic·cos 2ωt'), t' = t - te ≥ 0,
    with A = peak_multiple × baseline current peak.
    """

    peak_multiple: float = 4.0
    decay_tau: float = 0.1
    second_harmonic: float = 0.3
    energization_time: float = 0.0

    def validate(self) -> None:
        if self.peak_multiple <= 0:
            raise SettingsError("inrush.peak_multiple must be > 0")
        if self.decay_tau <= 0:
            raise SettingsError("inrush.decay_tau must be > 0")
        if self.second_harmonic < 0:
            raise SettingsError("inrush.second_harmonic must be >= 0")
        if self.energization_time < 0:
            raise SettingsError("inrush.energization_time must be >= 0")


@dataclass(frozen=True)
class SimConfig(BaseSettings):
    """Parameters of one synthesized record.

    Defaults describe a 115 kV / 4.16 kV substation transformer fed from a
    stiff source, sampled at 2048 samples per 60 Hz cycle.
    """

    system_frequency: float = 60.0
    samples_per_cycle: int = 2048
    duration: float = 2.0
    source_voltage_rms: float = 115e3 / math.sqrt(3.0)
    source_impedance: Tuple[float, float] = (0.5, 0.01)
    source_phase_deg: float = 0.0
    transformer_ratio: float = 115.0 / 4.16
    base_load: Tuple[float, float] = (3.0, 0.002)
    harmonics: Dict[int, float] = field(default_factory=dict)
    noise_sigma: float = 0.0
    inrush: Optional[InrushParams] = None
    rng_seed: int = 0
    t0: float = 0.0

    def validate(self) -> None:
        if self.system_frequency <= 0:
            raise SettingsError("sim.system_frequency must be > 0")
        if self.samples_per_cycle < 64:
            raise SettingsError("sim.samples_per_cycle must be >= 64")
        if self.duration <= 0:
            raise SettingsError("sim.duration must be > 0")
        if self.source_voltage_rms <= 0:
            raise SettingsError("sim.source_voltage_rms must be > 0")
        r_src, l_src = self.source_impedance
        if r_src < 0 or l_src < 0:
            raise SettingsError("sim.source_impedance entries must be >= 0")
        if self.transformer_ratio <= 0:
            raise SettingsError("sim.transformer_ratio must be > 0")
        r_load, l_load = self.base_load
        if r_load <= 0 or l_load < 0:
            raise SettingsError("sim.base_load needs R > 0 and L >= 0")
        for order, fraction in self.harmonics.items():
            if order < 2:
                raise SettingsError(f"sim.harmonics: order {order} must be >= 2")
            if fraction < 0:
                raise SettingsError(f"sim.harmonics: fraction for order {order} must be >= 0")
        if self.noise_sigma < 0:
            raise SettingsError("sim.noise_sigma must be >= 0")

    @property
    def sample_rate(self) -> float:
        return self.system_frequency * self.samples_per_cycle

    @property
    def dt(self) -> float:
        return 1.0 / self.sample_rate

    @property
    def n_samples(self) -> int:
        return int(round(self.duration * self.sample_rate))

    @property
    def omega(self) -> float:
        return 2.0 * math.pi * self.system_frequency

    @property
    def secondary_source_impedance(self) -> Tuple[float, float]:
        """Source impedance referred to the secondary side (divided by ratio²)."""
        ratio_sq = self.transformer_ratio ** 2
        return self.source_impedance[0] / ratio_sq, self.source_impedance[1] / ratio_sq
