"""Settings for the subsequence graph scoring stage."""

from __future__ import annotations

from dataclasses import dataclass

from .base_settings import BaseSettings, SettingsError


@dataclass(frozen=True)
class S2gConfig(BaseSettings):
    """Subsequence length ℓ, query length ℓ_q (in transitions) and node grid."""

    subseq_len_l: int = 64
    query_len_lq: int = 256
    embed_dim: int = 2
    bins_per_axis: int = 50

    def validate(self) -> None:
        if self.subseq_len_l < 2:
            raise SettingsError("s2g.subseq_len_l must be >= 2")
        if self.query_len_lq < self.subseq_len_l:
            raise SettingsError("s2g.query_len_lq must be >= subseq_len_l")
        if not 1 <= self.embed_dim <= self.subseq_len_l:
            raise SettingsError("s2g.embed_dim must lie in [1, subseq_len_l]")
        if self.bins_per_axis < 2:
            raise SettingsError("s2g.bins_per_axis must be >= 2")
