"""Settings for the delay-embedding / forcing extraction stage."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .base_settings import BaseSettings, SettingsError


class ForcingMode(str, Enum):
    """How the forcing series is produced over a whole record."""

    TRAINED = "trained"    # baseline-fitted modes projected causally over the record
    WINDOWED = "windowed"  # per-window residual direction, overlap-averaged


class MedianRule(str, Enum):
    """How the Marchenko-Pastur median in the hard threshold is obtained."""

    APPROXIMATE = "approximate"
    EXACT = "exact"


@dataclass(frozen=True)
class HavokConfig(BaseSettings):
    """Embedding window, rank selection and windowing of the forcing extraction.

    ``window_k`` defaults to one eighth of a cycle when left unset.
    ``rank`` fixes the HAVOK rank r; otherwise r = SVHT rank + ``forcing_offset``.
    """

    window_k: Optional[int] = None
    mode: ForcingMode = ForcingMode.WINDOWED
    analysis_cycles: float = 4.0
    hop_cycles: float = 0.25
    rank: Optional[int] = None
    forcing_offset: int = 1
    min_rank: int = 2
    noise_known: bool = False
    noise_sigma: Optional[float] = None
    median_rule: MedianRule = MedianRule.APPROXIMATE

    def validate(self) -> None:
        if self.window_k is not None and self.window_k < 2:
            raise SettingsError("havok.window_k must be >= 2")
        if self.analysis_cycles <= 0:
            raise SettingsError("havok.analysis_cycles must be > 0")
        if self.hop_cycles <= 0:
            raise SettingsError("havok.hop_cycles must be > 0")
        if self.rank is not None and self.rank < 2:
            raise SettingsError("havok.rank must be >= 2")
        if self.forcing_offset < 0:
            raise SettingsError("havok.forcing_offset must be >= 0")
        if self.min_rank < 2:
            raise SettingsError("havok.min_rank must be >= 2")
        if self.noise_known and (self.noise_sigma is None or self.noise_sigma <= 0):
            raise SettingsError("havok.noise_sigma must be > 0 when noise_known is set")

    def resolve_window(self, samples_per_cycle: int) -> int:
        return self.window_k if self.window_k is not None else max(2, samples_per_cycle // 8)
