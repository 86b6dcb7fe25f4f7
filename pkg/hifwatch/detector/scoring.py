"""Score normalization, the 3-sigma threshold and interval extraction."""

from __future__ import annotations

from typing import List, Optional, Tuple

import numpy as np

from hifwatch.config.detector_settings import BaselineTooShortError, DetectorConfig
from hifwatch.errors import ParameterError
from hifwatch.s2g.models import ScoreSeries
from hifwatch.tracing.logger import get_module_logger
from hifwatch.utils.smoothing import moving_average

from .models import DetectedInterval, NormalizedScores

logger = get_module_logger()


def baseline_mask(s: ScoreSeries, baseline_end: Optional[float]) -> np.ndarray:
    """Positions whose timestamp falls before ``baseline_end`` (all when None)."""
    if baseline_end is None:
        return np.ones(len(s), dtype=bool)
    return s.timestamps < baseline_end


def settled_positions(s: ScoreSeries, rows: Optional[Tuple[int, int]]) -> np.ndarray:
    """Positions whose whole query span lies inside the half-open forcing row range ``rows``."""
    if rows is None:
        return np.ones(len(s), dtype=bool)
    first, stop = rows
    coverage = np.asarray(s.coverage)
    return (coverage[:, 0] >= first) & (coverage[:, 1] < stop)


def normalize_scores(
    s: ScoreSeries,
    w: int,
    baseline_end: Optional[float] = None,
    settled: Optional[np.ndarray] = None,
) -> NormalizedScores:
    """Z-normalize against the baseline statistics, then smooth with a trailing width-``w`` average.

    Only ``settled`` positions (all when None) contribute to the statistics.
    The result keeps the mask, narrowed to positions whose whole smoothing
    window is settled, for the threshold.

    A baseline with zero variance falls back to unit variance; the fallback is
    recorded on the result and logged.

    Raises:
        ParameterError: w < 1.
        BaselineTooShortError: no settled score lies in the baseline span.
    """
    if w < 1:
        raise ParameterError("smoothing window must be >= 1")
    scores = np.asarray(s.norm_scores, dtype=float)
    settled = np.ones(scores.size, dtype=bool) if settled is None else np.asarray(settled, dtype=bool)
    if settled.shape != scores.shape:
        raise ParameterError("settled mask and scores differ in length")
    baseline = scores[baseline_mask(s, baseline_end) & settled]
    if baseline.size == 0:
        raise BaselineTooShortError("the baseline span holds no settled scores")
    mean = float(np.mean(baseline))
    std = float(np.std(baseline))
    fallback = not std > 0
    if fallback:
        logger.warning("baseline scores have zero variance; normalizing with unit variance")
        std = 1.0
    smoothed = moving_average((scores - mean) / std, w)
    # a smoothed score is settled only when its whole trailing window is
    settled = moving_average(settled.astype(float), w) > 1.0 - 1e-9
    return NormalizedScores(
        timestamps=s.timestamps,
        norm_scores=smoothed,
        coverage=s.coverage,
        query_len=s.query_len,
        graph=s.graph,
        baseline_mean=mean,
        baseline_std=std,
        baseline_count=int(baseline.size),
        variance_fallback=fallback,
        settled=settled,
    )


def three_sigma(
    s: ScoreSeries, cfg: DetectorConfig, baseline_end: Optional[float] = None
) -> Tuple[float, np.ndarray]:
    """theta = mean - k·std of the baseline scores; positions below theta are anomalous.

    ``cfg.fixed_theta`` replaces the adaptive rule when set. When ``s`` carries a
    settled mask, unsettled positions neither enter the statistics nor get flagged.

    Raises:
        BaselineTooShortError: fewer than ``cfg.min_baseline_scores`` baseline scores.
    """
    scores = np.asarray(s.norm_scores, dtype=float)
    settled = getattr(s, "settled", None)
    if settled is None:
        settled = np.ones(scores.size, dtype=bool)
    if cfg.fixed_theta is not None:
        theta = float(cfg.fixed_theta)
    else:
        baseline = scores[baseline_mask(s, baseline_end) & settled]
        if baseline.size < cfg.min_baseline_scores:
            raise BaselineTooShortError(
                f"baseline span holds {baseline.size} scores; the 3-sigma rule needs {cfg.min_baseline_scores}"
            )
        theta = float(np.mean(baseline) - cfg.sigma_multiplier * np.std(baseline))
    mask = (scores < theta) & settled
    logger.debug(f"theta={theta:.4f} flags {int(np.count_nonzero(mask))} of {scores.size} positions")
    return theta, mask


def extract_intervals(
    mask: np.ndarray,
    timestamps: np.ndarray,
    min_dur: float,
    scores: Optional[np.ndarray] = None,
) -> List[DetectedInterval]:
    """Maximal runs of flagged positions lasting at least ``min_dur`` seconds.

    A run's duration is the time from its first to its last flagged position;
    ``scores`` (anomaly scores) supply the peak value of each run.
    """
    mask = np.asarray(mask, dtype=bool)
    timestamps = np.asarray(timestamps, dtype=float)
    if mask.shape != timestamps.shape:
        raise ParameterError("mask and timestamps differ in length")
    padded = np.concatenate(([0], mask.astype(np.int8), [0]))
    edges = np.flatnonzero(np.diff(padded))
    intervals = []
    for first, stop in zip(edges[::2], edges[1::2]):
        duration = float(timestamps[stop - 1] - timestamps[first])
        if duration < min_dur:
            continue
        peak = None if scores is None else float(np.max(scores[first:stop]))
        intervals.append(DetectedInterval(onset=float(timestamps[first]), duration=duration, peak_anomaly_score=peak))
    return intervals
