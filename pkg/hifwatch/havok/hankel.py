"""Time-delay embedding of a scalar series."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from hifwatch.errors import ParameterError


@dataclass
class HankelEmbedding:
    """Delay matrix with one delay vector per row.

    Row i holds x[i], ..., x[i+k-1]; rows index time, so the left singular
    vectors of the matrix are the time-indexed factor.
    """

    matrix: np.ndarray
    window_k: int
    source_timestamps: np.ndarray

    @property
    def n_rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def row_timestamps(self) -> np.ndarray:
        """Timestamp of the newest sample of each delay vector."""
        return self.source_timestamps[self.window_k - 1:]

    @property
    def aspect_beta(self) -> float:
        m, k = self.matrix.shape
        return min(m, k) / max(m, k)


def build_hankel(
    x: np.ndarray, k: int, timestamps: Optional[np.ndarray] = None, *, allow_wide: bool = False
) -> HankelEmbedding:
    """Stack the length-``k`` delay vectors of ``x`` into an (N-k+1) × k matrix.

    ``allow_wide`` admits windows up to N - 1, which leaves fewer rows than columns.

    Raises:
        ParameterError: k outside [2, N/2] (or [2, N-1] with ``allow_wide``).
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ParameterError("series must be one-dimensional")
    n = x.size
    limit = n - 1 if allow_wide else n // 2
    if not isinstance(k, (int, np.integer)) or not 2 <= k <= limit:
        raise ParameterError(f"window k={k} must satisfy 2 <= k <= {limit} (N={n})")
    if timestamps is None:
        timestamps = np.arange(n, dtype=float)
    elif len(timestamps) != n:
        raise ParameterError("timestamps and series differ in length")
    matrix = np.ascontiguousarray(sliding_window_view(x, int(k)))
    return HankelEmbedding(matrix=matrix, window_k=int(k), source_timestamps=np.asarray(timestamps, dtype=float))
