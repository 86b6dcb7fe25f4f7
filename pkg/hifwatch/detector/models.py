"""Detection results: intervals, evaluation against a schedule and the report document."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from hifwatch.havok.forcing import HavokDecomposition
from hifwatch.s2g.models import ScoreSeries
from hifwatch.utils.file_utils import dumps_document


@dataclass
class NormalizedScores(ScoreSeries):
    """Score series after baseline z-normalization and smoothing."""

    baseline_mean: float = 0.0
    baseline_std: float = 1.0
    baseline_count: int = 0
    variance_fallback: bool = False
    settled: Optional[np.ndarray] = None

    @property
    def anomaly_scores(self) -> np.ndarray:
        """Negated normalized normality: faults show as positive spikes."""
        return -self.norm_scores


@dataclass(frozen=True)
class DetectedInterval:
    onset: float
    duration: float
    peak_anomaly_score: Optional[float] = None
    koopman_deviation: Optional[float] = None

    @property
    def end(self) -> float:
        return self.onset + self.duration

    def as_dict(self) -> Dict[str, Any]:
        return {
            "onset": self.onset,
            "duration": self.duration,
            "peak_anomaly_score": self.peak_anomaly_score,
            "koopman_deviation": self.koopman_deviation,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "DetectedInterval":
        return cls(
            onset=float(data["onset"]),
            duration=float(data["duration"]),
            peak_anomaly_score=data.get("peak_anomaly_score"),
            koopman_deviation=data.get("koopman_deviation"),
        )


@dataclass(frozen=True)
class EventMatch:
    fault_onset: float
    detected_onset: float
    latency: float
    latency_cycles: float


@dataclass
class EvaluationResult:
    """Detections matched against the scheduled faults.

    ``continuations`` counts detections starting inside an already matched
    fault (plus the matching horizon); they are neither hits nor false positives.
    """

    matches: List[EventMatch] = field(default_factory=list)
    missed_onsets: List[float] = field(default_factory=list)
    false_positives: List[Tuple[float, float]] = field(default_factory=list)
    benign_window_false_positives: List[Tuple[float, float]] = field(default_factory=list)
    continuations: int = 0
    n_faults: int = 0

    @property
    def detection_rate(self) -> float:
        return len(self.matches) / self.n_faults if self.n_faults else 1.0

    @property
    def latencies(self) -> List[float]:
        return [m.latency for m in self.matches]

    def as_dict(self) -> Dict[str, Any]:
        return {
            "n_faults": self.n_faults,
            "matched": len(self.matches),
            "missed": len(self.missed_onsets),
            "false_positives": len(self.false_positives),
            "benign_window_false_positives": len(self.benign_window_false_positives),
            "continuations": self.continuations,
            "detection_rate": self.detection_rate,
            "matches": [
                {
                    "fault_onset": m.fault_onset,
                    "detected_onset": m.detected_onset,
                    "latency_s": m.latency,
                    "latency_cycles": m.latency_cycles,
                }
                for m in self.matches
            ],
            "missed_onsets": list(self.missed_onsets),
            "false_positive_spans": [list(span) for span in self.false_positives],
        }


@dataclass
class DetectionReport:
    score_series: NormalizedScores
    threshold_theta: float
    anomaly_mask: np.ndarray
    intervals: List[DetectedInterval]
    config_echo: Dict[str, Any]
    input_digest: str
    record: Dict[str, Any]
    havok_summary: Dict[str, Any] = field(default_factory=dict)
    evaluation: Optional[EvaluationResult] = None
    version: str = ""
    forcing: Optional[HavokDecomposition] = field(default=None, repr=False)

    @property
    def latencies(self) -> List[float]:
        return self.evaluation.latencies if self.evaluation else []

    @property
    def false_positive_spans(self) -> List[Tuple[float, float]]:
        return self.evaluation.false_positives if self.evaluation else []

    def to_document(self) -> Dict[str, Any]:
        """Stable JSON-ready document; ``digest`` covers every other key."""
        scores = self.score_series
        document: Dict[str, Any] = {
            "version": self.version,
            "input_digest": self.input_digest,
            "record": dict(self.record),
            "config": self.config_echo,
            "havok": dict(self.havok_summary),
            "threshold": {
                "theta": self.threshold_theta,
                "rule": "fixed" if self.config_echo.get("fixed_theta") is not None else "three_sigma",
                "baseline_mean": scores.baseline_mean,
                "baseline_std": scores.baseline_std,
                "baseline_count": scores.baseline_count,
                "variance_fallback": scores.variance_fallback,
            },
            "n_scores": len(scores),
            "n_flagged": int(np.count_nonzero(self.anomaly_mask)),
            "intervals": [interval.as_dict() for interval in self.intervals],
            "latencies": self.latencies,
            "false_positive_spans": [list(span) for span in self.false_positive_spans],
            "evaluation": self.evaluation.as_dict() if self.evaluation else None,
        }
        document["digest"] = document_digest(document)
        return document


def document_digest(document: Dict[str, Any]) -> str:
    body = {key: value for key, value in document.items() if key != "digest"}
    return hashlib.sha256(dumps_document(body).encode("utf-8")).hexdigest()
