"""End-to-end detection on one waveform record.

Stages: forcing extraction → |forcing| → subsequence-graph scores →
normalization → threshold → intervals, followed by a Koopman spectrum
comparison of each detected interval against the baseline model.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from typing import Iterator, List, Optional

import numpy as np

from hifwatch.config.base_settings import SettingsError
from hifwatch.config.detector_settings import DetectorConfig
from hifwatch.config.havok_settings import ForcingMode
from hifwatch.errors import HifwatchError, PipelineError, SampleRateMismatchError
from hifwatch.havok.forcing import ForcingModel, HavokDecomposition, extract_forcing, fit_forcing_model
from hifwatch.havok.koopman import KoopmanApprox, koopman_from_coordinates, spectrum_deviation
from hifwatch.s2g.graph import score_series
from hifwatch.tracing.logger import get_module_logger
from hifwatch.tracing.logging_context import LoggingContext
from hifwatch.utils.file_utils import sha256_arrays
from hifwatch.wavesim.models import EventSchedule, Waveform

from .evaluation import evaluate
from .models import DetectedInterval, DetectionReport
from .scoring import extract_intervals, normalize_scores, settled_positions, three_sigma

logger = get_module_logger()


@contextmanager
def pipeline_stage(name: str) -> Iterator[None]:
    """Scope logging to a stage and attribute any failure to it."""
    with LoggingContext(stage=name):
        try:
            yield
        except PipelineError:
            raise
        except (HifwatchError, SettingsError, ValueError, ArithmeticError) as e:
            logger.error(f"stage {name} failed: {e}")
            raise PipelineError(name, e) from e


def waveform_digest(w: Waveform) -> str:
    return sha256_arrays(w.i_primary, float(w.sample_rate), float(w.t0))


def baseline_koopman(model: ForcingModel, baseline_series: np.ndarray) -> KoopmanApprox:
    """Koopman fit of the model coordinates over its own training samples."""
    return koopman_from_coordinates(model.coordinates(baseline_series), rank=model.rank_r)


def baseline_frequencies(baseline: KoopmanApprox, sample_rate: float) -> List[float]:
    """Distinct oscillation frequencies (Hz) of the baseline Koopman eigenvalues."""
    omega = np.abs(baseline.continuous_eigenvalues(1.0 / sample_rate).imag)
    return sorted({round(float(f), 3) for f in omega / (2 * np.pi)})


def _settled_span(decomposition: HavokDecomposition) -> Optional[List[float]]:
    if decomposition.settled_rows is None:
        return None
    first, stop = decomposition.settled_rows
    return [float(decomposition.timestamps[first]), float(decomposition.timestamps[stop - 1])]


def koopman_deviations(
    model: ForcingModel,
    baseline: KoopmanApprox,
    decomposition: HavokDecomposition,
    intervals: List[DetectedInterval],
    window: int,
) -> List[DetectedInterval]:
    """Attach the spectrum deviation of one window after each onset from the baseline Koopman fit."""
    if baseline.diagnostics["pseudo_inverse_truncated"]:
        logger.warning("baseline coordinates are rank deficient; Koopman deviations skipped")
        return intervals
    coordinates = decomposition.coordinates
    annotated = []
    for interval in intervals:
        start = int(np.searchsorted(decomposition.timestamps, interval.onset))
        segment = coordinates[start:start + window]
        deviation = None
        if segment.shape[0] > model.rank_r + 1:
            observed = koopman_from_coordinates(segment, rank=model.rank_r)
            if not observed.diagnostics["pseudo_inverse_truncated"]:
                deviation = spectrum_deviation(baseline, observed)
        annotated.append(
            DetectedInterval(interval.onset, interval.duration, interval.peak_anomaly_score, deviation)
        )
    return annotated


def run_pipeline(
    w: Waveform,
    cfg: DetectorConfig,
    ground_truth: Optional[EventSchedule] = None,
) -> DetectionReport:
    """Detect arcing faults in the primary current of ``w``.

    The first ``cfg.baseline_span`` seconds are treated as fault-free. With a
    ground-truth schedule the report also carries the evaluation.

    Raises:
        SampleRateMismatchError: ``cfg.expected_sample_rate`` is set and differs.
        PipelineError: a stage failed; ``stage`` and ``cause`` identify it.
    """
    from hifwatch import __version__

    if cfg.expected_sample_rate is not None and not math.isclose(
        w.sample_rate, cfg.expected_sample_rate, rel_tol=1e-6
    ):
        raise SampleRateMismatchError(w.sample_rate, cfg.expected_sample_rate)

    x = w.i_primary
    t = w.time
    samples_per_cycle = w.sample_rate / cfg.system_frequency
    baseline_end = w.t0 + cfg.baseline_span
    digest = waveform_digest(w)

    with LoggingContext(record=digest[:12]):
        logger.info(f"Detecting on {w.n_samples} samples at {w.sample_rate:.0f} Hz")
        with pipeline_stage("havok"):
            model = fit_forcing_model(
                x, t, cfg.havok, samples_per_cycle=samples_per_cycle, baseline_end=baseline_end
            )
            decomposition = extract_forcing(
                x, t, cfg.havok,
                samples_per_cycle=samples_per_cycle,
                baseline_end=baseline_end,
                model=model,
            )

        with pipeline_stage("s2g"):
            scores = score_series(decomposition.forcing_magnitude, decomposition.timestamps, cfg.s2g)

        with pipeline_stage("normalize"):
            settled = settled_positions(scores, decomposition.settled_rows)
            normalized = normalize_scores(scores, cfg.smoothing_window, baseline_end, settled)

        with pipeline_stage("threshold"):
            theta, mask = three_sigma(normalized, cfg, baseline_end)

        with pipeline_stage("intervals"):
            intervals = extract_intervals(
                mask, normalized.timestamps, cfg.min_event_duration, normalized.anomaly_scores
            )
            logger.info(f"{len(intervals)} intervals flagged (theta={theta:.4f})")

        with pipeline_stage("koopman"):
            projected = decomposition if cfg.havok.mode == ForcingMode.TRAINED else model.project(x, t)
            first, stop = model.training_indices
            baseline = baseline_koopman(model, x[first:stop])
            intervals = koopman_deviations(
                model,
                baseline,
                projected,
                intervals,
                window=int(round(samples_per_cycle)),
            )

        evaluation = None
        if ground_truth is not None:
            with pipeline_stage("evaluate"):
                evaluation = evaluate(
                    intervals,
                    ground_truth,
                    horizon=cfg.max_latency,
                    system_frequency=cfg.system_frequency,
                    benign_window=cfg.benign_window,
                    t0=w.t0,
                )

    return DetectionReport(
        score_series=normalized,
        threshold_theta=theta,
        anomaly_mask=mask,
        intervals=intervals,
        config_echo=cfg.as_dict(),
        input_digest=digest,
        record={
            "sample_rate": float(w.sample_rate),
            "n_samples": int(w.n_samples),
            "t0": float(w.t0),
            "duration": float(w.duration),
        },
        havok_summary={
            "mode": decomposition.mode,
            "window_k": model.window_k,
            "svht_rank": model.svht_rank,
            "rank_r": decomposition.rank_r,
            "training_span": list(model.training_span),
            "settled_span": _settled_span(decomposition),
            "baseline_frequencies_hz": baseline_frequencies(baseline, w.sample_rate),
            "rank_trace": [[time, rank] for time, rank in decomposition.rank_trace],
        },
        evaluation=evaluation,
        version=__version__,
        forcing=decomposition,
    )
