"""Score normalization, thresholding, interval extraction, evaluation and the pipeline."""

from .evaluation import evaluate
from .models import DetectedInterval, DetectionReport, EvaluationResult, EventMatch, NormalizedScores
from .pipeline import run_pipeline, waveform_digest
from .report_io import intervals_from_document, read_report, read_scores_csv, write_report, write_scores_csv
from .scoring import extract_intervals, normalize_scores, settled_positions, three_sigma

__all__ = [
    "normalize_scores",
    "settled_positions",
    "three_sigma",
    "extract_intervals",
    "evaluate",
    "run_pipeline",
    "waveform_digest",
    "DetectedInterval",
    "DetectionReport",
    "EvaluationResult",
    "EventMatch",
    "NormalizedScores",
    "write_report",
    "read_report",
    "write_scores_csv",
    "read_scores_csv",
    "intervals_from_document",
]
