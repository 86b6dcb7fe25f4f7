"""Matching detected intervals to scheduled faults."""

from __future__ import annotations

from typing import Iterable, Optional

from hifwatch.tracing.logger import get_module_logger
from hifwatch.wavesim.models import EventSchedule

from .models import DetectedInterval, EvaluationResult, EventMatch

logger = get_module_logger()


def evaluate(
    intervals: Iterable[DetectedInterval],
    ground_truth: EventSchedule,
    *,
    horizon: Optional[float] = None,
    system_frequency: float = 60.0,
    benign_window: float = 0.05,
    t0: float = 0.0,
) -> EvaluationResult:
    """Match detections to fault onsets and count misses and false positives.

    A detection matches the earliest unmatched fault with
    onset <= detection <= onset + horizon (one cycle by default); its latency
    is the difference. Schedule times are relative to the record start ``t0``.
    """
    cycle = 1.0 / system_frequency
    horizon = cycle if horizon is None else horizon
    faults = [(t0 + e.onset, t0 + e.end) for e in ground_truth.hif_events]
    benign_onsets = [t0 + e.onset for e in ground_truth.benign_events]
    matched = [False] * len(faults)
    result = EvaluationResult(n_faults=len(faults))

    for interval in sorted(intervals, key=lambda i: i.onset):
        detected = interval.onset
        hit = next(
            (n for n, (onset, _) in enumerate(faults) if not matched[n] and onset <= detected <= onset + horizon),
            None,
        )
        if hit is not None:
            matched[hit] = True
            latency = detected - faults[hit][0]
            result.matches.append(EventMatch(faults[hit][0], detected, latency, latency / cycle))
            continue
        if any(matched[n] and onset <= detected <= end + horizon for n, (onset, end) in enumerate(faults)):
            result.continuations += 1
            continue
        span = (interval.onset, interval.duration)
        result.false_positives.append(span)
        if any(onset <= detected <= onset + benign_window for onset in benign_onsets):
            result.benign_window_false_positives.append(span)

    result.missed_onsets = [faults[n][0] for n in range(len(faults)) if not matched[n]]
    logger.info(
        f"{len(result.matches)}/{result.n_faults} faults detected, "
        f"{len(result.false_positives)} false positives, {result.continuations} continuations"
    )
    return result
