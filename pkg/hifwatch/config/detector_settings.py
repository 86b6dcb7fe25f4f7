"""Settings for normalization, thresholding and interval extraction."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .base_settings import BaseSettings, SettingsError
from .havok_settings import HavokConfig
from .s2g_settings import S2gConfig


class BaselineTooShortError(SettingsError):
    """The baseline span holds fewer scores than the threshold rule needs."""


@dataclass(frozen=True)
class DetectorConfig(BaseSettings):
    """End-to-end detection parameters.

    ``system_frequency`` sets the cycle length used for the embedding window,
    the analysis window and the default matching horizon.
    ``max_latency`` is the matching horizon in seconds (one system cycle when unset).
    ``fixed_theta`` replaces the adaptive sigma rule with a constant threshold on
    the normalized normality score.
    """

    system_frequency: float = 60.0
    baseline_span: float = 0.5
    smoothing_window: int = 16
    sigma_multiplier: float = 3.0
    min_event_duration: float = 0.0005
    min_baseline_scores: int = 100
    fixed_theta: Optional[float] = None
    max_latency: Optional[float] = None
    benign_window: float = 0.05
    expected_sample_rate: Optional[float] = None
    havok: HavokConfig = field(default_factory=HavokConfig)
    s2g: S2gConfig = field(default_factory=S2gConfig)

    def validate(self) -> None:
        if self.system_frequency <= 0:
            raise SettingsError("detector.system_frequency must be > 0")
        if self.baseline_span <= 0:
            raise SettingsError("detector.baseline_span must be > 0")
        if self.smoothing_window < 1:
            raise SettingsError("detector.smoothing_window must be >= 1")
        if self.sigma_multiplier <= 0:
            raise SettingsError("detector.sigma_multiplier must be > 0")
        if self.min_event_duration < 0:
            raise SettingsError("detector.min_event_duration must be >= 0")
        if self.min_baseline_scores < 2:
            raise SettingsError("detector.min_baseline_scores must be >= 2")
        if self.max_latency is not None and self.max_latency <= 0:
            raise SettingsError("detector.max_latency must be > 0")
        if self.benign_window < 0:
            raise SettingsError("detector.benign_window must be >= 0")
        if self.expected_sample_rate is not None and self.expected_sample_rate <= 0:
            raise SettingsError("detector.expected_sample_rate must be > 0")
