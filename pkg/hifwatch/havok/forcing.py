"""Forcing extraction: the last retained delay coordinate of a HAVOK model.

Two ways of producing it over a whole record are offered:

- trained: the delay-embedding modes are fitted once on the tail of the
  fault-free baseline and every later delay vector is projected onto them.
  The projection of a delay vector only uses past samples, so each forcing
  value is causal with respect to its timestamp.
- windowed: every analysis window, hopped along the record, is searched for
  the strongest direction the baseline modes leave unexplained. The window
  is projected onto it and scaled by the baseline forcing level, and the
  segments are sign-aligned and averaged where they overlap. Rows that
  fewer than a full window's worth of hops cover are reported as unsettled.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np
import pandas as pd
from scipy import linalg, signal

from hifwatch.config.havok_settings import ForcingMode, HavokConfig
from hifwatch.errors import NonFiniteSampleError, ParameterError
from hifwatch.tracing.logger import get_module_logger
from hifwatch.utils.file_utils import write_csv
from hifwatch.utils.smoothing import moving_average

from .decomposition import SvdFactors, optimal_rank, svd
from .hankel import build_hankel

logger = get_module_logger()


@dataclass
class HavokDecomposition:
    """Delay coordinates v_1..v_{r-1} and forcing v_r, one row per delay vector.

    ``forcing`` has unit-norm scaling (a column of the time-indexed singular
    factor); ``forcing_amplitude`` is the same series multiplied by sigma_r, so
    it carries the amplitude of the r-th component in signal units.
    """

    rank_r: int
    delay_coordinates: np.ndarray
    forcing: np.ndarray
    timestamps: np.ndarray
    forcing_amplitude: np.ndarray
    singular_values: np.ndarray
    svht_rank: Optional[int] = None
    mode: str = ForcingMode.TRAINED.value
    rank_trace: List[Tuple[float, int]] = field(default_factory=list)
    stitched_magnitude: Optional[np.ndarray] = None
    # half-open row range covered by enough windows to be trusted
    settled_rows: Optional[Tuple[int, int]] = None

    @property
    def forcing_magnitude(self) -> np.ndarray:
        """|forcing|; in windowed mode the overlap average of the per-window magnitudes."""
        if self.stitched_magnitude is not None:
            return self.stitched_magnitude
        return np.abs(self.forcing)

    @property
    def coordinates(self) -> np.ndarray:
        """All r coordinates as an (n, r) array, forcing last."""
        return np.column_stack([self.delay_coordinates, self.forcing])

    def __len__(self) -> int:
        return self.forcing.size


def forcing_series(f: SvdFactors, r: int, timestamps: Optional[np.ndarray] = None) -> HavokDecomposition:
    """Split the time-indexed singular factor into r-1 delay coordinates and the forcing.

    Raises:
        ParameterError: r outside [2, min(m, k)] or mismatched timestamps.
    """
    n_sv = f.singular_values.size
    if not 2 <= r <= n_sv:
        raise ParameterError(f"rank r={r} must lie in [2, {n_sv}]")
    m = f.left_vectors.shape[0]
    if timestamps is None:
        timestamps = np.arange(m, dtype=float)
    elif len(timestamps) != m:
        raise ParameterError(f"{len(timestamps)} timestamps for {m} delay vectors")
    forcing = f.left_vectors[:, r - 1].copy()
    return HavokDecomposition(
        rank_r=r,
        delay_coordinates=f.left_vectors[:, :r - 1].copy(),
        forcing=forcing,
        timestamps=np.asarray(timestamps, dtype=float),
        forcing_amplitude=forcing * f.singular_values[r - 1],
        singular_values=f.singular_values.copy(),
    )


def select_rank(singular_values: np.ndarray, aspect_beta: float, n_rows: int, cfg: HavokConfig) -> Tuple[int, int]:
    """Return (SVHT rank, HAVOK rank r) for a decomposed window."""
    svht_rank = optimal_rank(
        singular_values,
        aspect_beta,
        cfg.noise_known,
        noise_sigma=cfg.noise_sigma,
        n_rows=n_rows,
        min_rank=cfg.min_rank,
        median_rule=cfg.median_rule.value,
    )
    r = cfg.rank if cfg.rank is not None else svht_rank + cfg.forcing_offset
    return svht_rank, int(min(max(r, 2), singular_values.size))


def _safe_scales(singular_values: np.ndarray, window_k: int) -> np.ndarray:
    floor = np.finfo(float).eps * window_k * singular_values[0]
    if np.any(singular_values <= floor):
        logger.warning("retained singular values reach the numerical floor; forcing scale is clamped")
    return np.maximum(singular_values, floor)


@dataclass
class ForcingModel:
    """Delay-embedding modes fitted on a fault-free training window."""

    modes: np.ndarray
    singular_values: np.ndarray
    spectrum: np.ndarray
    rank_r: int
    svht_rank: int
    window_k: int
    training_span: Tuple[float, float]
    training_indices: Tuple[int, int] = (0, 0)

    def coordinates(self, x: np.ndarray) -> np.ndarray:
        """(N-k+1, r) projections of every delay vector of ``x`` onto the modes.

        On the training window these equal the time-indexed singular factor.
        """
        x = np.asarray(x, dtype=float)
        if x.size < self.window_k:
            raise ParameterError(f"series of {x.size} samples is shorter than the window k={self.window_k}")
        scales = _safe_scales(self.singular_values, self.window_k)
        columns = [
            signal.correlate(x, self.modes[:, c], mode="valid") / scales[c]
            for c in range(self.rank_r)
        ]
        return np.column_stack(columns)

    def project(self, x: np.ndarray, timestamps: Optional[np.ndarray] = None) -> HavokDecomposition:
        x = np.asarray(x, dtype=float)
        if timestamps is None:
            timestamps = np.arange(x.size, dtype=float)
        coords = self.coordinates(x)
        forcing = coords[:, -1].copy()
        return HavokDecomposition(
            rank_r=self.rank_r,
            delay_coordinates=coords[:, :-1].copy(),
            forcing=forcing,
            timestamps=np.asarray(timestamps, dtype=float)[self.window_k - 1:],
            forcing_amplitude=forcing * self.singular_values[-1],
            singular_values=self.spectrum.copy(),
            svht_rank=self.svht_rank,
            mode=ForcingMode.TRAINED.value,
        )


def _check_series(x: np.ndarray, timestamps: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=float)
    timestamps = np.asarray(timestamps, dtype=float)
    if x.ndim != 1 or x.shape != timestamps.shape:
        raise ParameterError("series and timestamps must be one-dimensional and of equal length")
    bad = np.flatnonzero(~np.isfinite(x))
    if bad.size:
        raise NonFiniteSampleError(int(bad[0]), float(x[bad[0]]))
    return x, timestamps


def fit_forcing_model(
    x: np.ndarray,
    timestamps: np.ndarray,
    cfg: HavokConfig,
    *,
    samples_per_cycle: float,
    baseline_end: float,
) -> ForcingModel:
    """Fit the modes on the last ``cfg.analysis_cycles`` cycles before ``baseline_end``.

    Raises:
        ParameterError: the baseline is shorter than two embedding windows.
    """
    x, timestamps = _check_series(x, timestamps)
    k = cfg.resolve_window(int(round(samples_per_cycle)))
    n_base = int(np.count_nonzero(timestamps < baseline_end))
    n_train = min(n_base, int(round(cfg.analysis_cycles * samples_per_cycle)))
    if n_train < 2 * k:
        raise ParameterError(f"baseline holds {n_train} samples; the embedding window k={k} needs at least {2 * k}")
    start = n_base - n_train
    embedding = build_hankel(x[start:n_base], k, timestamps[start:n_base])
    factors = svd(embedding)
    svht_rank, r = select_rank(factors.singular_values, embedding.aspect_beta, max(embedding.matrix.shape), cfg)
    logger.info(
        f"Forcing model: k={k}, {embedding.n_rows} delay vectors, SVHT rank {svht_rank}, r={r}"
    )
    return ForcingModel(
        modes=factors.right_vectors[:, :r].copy(),
        singular_values=factors.singular_values[:r].copy(),
        spectrum=factors.singular_values.copy(),
        rank_r=r,
        svht_rank=svht_rank,
        window_k=k,
        training_span=(float(timestamps[start]), float(timestamps[n_base - 1])),
        training_indices=(start, n_base),
    )


def _window_spectrum(segment: np.ndarray, k: int) -> Tuple[np.ndarray, np.ndarray]:
    """Hankel matrix of one analysis window and its k × k Gram matrix."""
    h = build_hankel(segment, k).matrix
    return h, h.T @ h


def _residual_direction(gram: np.ndarray, complement: np.ndarray) -> np.ndarray:
    """Leading direction of what the model modes leave unexplained in a window."""
    _, eigenvectors = linalg.eigh(complement @ gram @ complement)
    direction = eigenvectors[:, -1]
    if direction[np.argmax(np.abs(direction))] < 0:
        direction = -direction
    return direction


def _windowed_forcing(
    x: np.ndarray, timestamps: np.ndarray, cfg: HavokConfig, samples_per_cycle: float, model: ForcingModel
) -> HavokDecomposition:
    """Forcing from per-window decompositions anchored to the baseline model.

    Every analysis window keeps the model's r-1 leading modes as its delay
    coordinates; its forcing direction is the leading singular direction of
    what those modes leave unexplained in that window. Segments are expressed
    in units of the model's r-th singular value, sign-aligned on the overlap
    and averaged.
    """
    k = model.window_k
    r = model.rank_r
    n = x.size
    length = min(n, int(round(cfg.analysis_cycles * samples_per_cycle)))
    hop = max(1, int(round(cfg.hop_cycles * samples_per_cycle)))
    if length < 2 * k:
        raise ParameterError(f"analysis window of {length} samples is shorter than 2k={2 * k}")
    starts = list(range(0, n - length + 1, hop))
    if starts[-1] != n - length:
        starts.append(n - length)

    rows_per_window = length - k + 1
    beta = min(rows_per_window, k) / max(rows_per_window, k)
    basis = model.modes[:, :r - 1]
    complement = np.eye(k) - basis @ basis.T
    scale = float(_safe_scales(model.singular_values, k)[-1])
    logger.info(f"Windowed forcing: {len(starts)} windows of {length} samples, hop {hop}, r={r}")

    total = np.zeros(n - k + 1)
    magnitude = np.zeros(n - k + 1)
    count = np.zeros(n - k + 1)
    rank_trace: List[Tuple[float, int]] = []
    for start in starts:
        h, gram = _window_spectrum(x[start:start + length], k)
        sv = np.sqrt(np.clip(linalg.eigvalsh(gram)[::-1], 0.0, None))
        window_svht, _ = select_rank(sv, beta, max(rows_per_window, k), cfg)
        rank_trace.append((float(timestamps[start + length - 1]), window_svht))
        direction = _residual_direction(gram, complement)
        segment = h @ direction / scale
        rows = slice(start, start + rows_per_window)
        covered = count[rows] > 0
        if covered.any():
            reference = total[rows][covered] / count[rows][covered]
            if np.dot(reference, segment[covered]) < 0:
                segment = -segment
        total[rows] += segment
        magnitude[rows] += np.abs(segment)
        count[rows] += 1

    settled = np.flatnonzero(count >= min(max(1, rows_per_window // hop), count.max()))
    forcing = total / count
    coords = model.coordinates(x)
    return HavokDecomposition(
        rank_r=r,
        delay_coordinates=coords[:, :r - 1].copy(),
        forcing=forcing,
        timestamps=timestamps[k - 1:],
        forcing_amplitude=forcing * scale,
        singular_values=model.spectrum.copy(),
        svht_rank=model.svht_rank,
        mode=ForcingMode.WINDOWED.value,
        rank_trace=rank_trace,
        stitched_magnitude=magnitude / count,
        settled_rows=(int(settled[0]), int(settled[-1]) + 1),
    )


def extract_forcing(
    x: np.ndarray,
    timestamps: np.ndarray,
    cfg: HavokConfig,
    *,
    samples_per_cycle: float,
    baseline_end: float,
    model: Optional[ForcingModel] = None,
) -> HavokDecomposition:
    """Forcing series over a whole record in the mode ``cfg.mode`` selects.

    Both modes start from the baseline model; ``model`` reuses one that is
    already fitted.
    """
    x, timestamps = _check_series(x, timestamps)
    if model is None:
        model = fit_forcing_model(
            x, timestamps, cfg, samples_per_cycle=samples_per_cycle, baseline_end=baseline_end
        )
    if cfg.mode == ForcingMode.WINDOWED:
        return _windowed_forcing(x, timestamps, cfg, samples_per_cycle, model)
    return model.project(x, timestamps)


def forcing_frame(decomposition: HavokDecomposition, smoothing_window: int = 1) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "time_s": decomposition.timestamps,
            "forcing": decomposition.forcing,
            "forcing_magnitude": moving_average(decomposition.forcing_magnitude, smoothing_window),
        }
    )


def write_forcing_csv(
    decomposition: HavokDecomposition,
    path: Union[str, Path],
    smoothing_window: int = 1,
    force: bool = False,
) -> Path:
    """Write ``time_s,forcing,forcing_magnitude`` (magnitude smoothed over ``smoothing_window``)."""
    return write_csv(forcing_frame(decomposition, smoothing_window), path, force=force)
