"""Reading and writing detection reports and score tables."""

from __future__ import annotations

from pathlib import Path
from typing import Any, Dict, List, Union

import numpy as np
import pandas as pd

from hifwatch.errors import WaveformFormatError
from hifwatch.utils.file_utils import read_document, read_numeric_csv, write_csv, write_document

from .models import DetectedInterval, DetectionReport, document_digest

SCORE_COLUMNS = ("time_s", "anomaly_score", "flagged")


def write_report(report: DetectionReport, path: Union[str, Path], force: bool = False) -> Path:
    return write_document(report.to_document(), path, force=force)


def score_frame(report: DetectionReport) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "time_s": report.score_series.timestamps,
            "anomaly_score": report.score_series.anomaly_scores,
            "flagged": report.anomaly_mask.astype(np.int8),
        }
    )


def write_scores_csv(report: DetectionReport, path: Union[str, Path], force: bool = False) -> Path:
    """Write ``time_s,anomaly_score,flagged``."""
    return write_csv(score_frame(report), path, force=force)


def read_scores_csv(path: Union[str, Path]) -> pd.DataFrame:
    return read_numeric_csv(path, SCORE_COLUMNS)


def read_report(path: Union[str, Path]) -> Dict[str, Any]:
    """Load a report document and check its digest.

    Raises:
        WaveformFormatError: the document is not a report or its digest does not match.
    """
    document = read_document(path)
    for key in ("input_digest", "intervals", "record", "digest"):
        if key not in document:
            raise WaveformFormatError(f"report lacks '{key}'", path=str(path))
    if document_digest(document) != document["digest"]:
        raise WaveformFormatError("report digest does not match its content", path=str(path))
    return document


def intervals_from_document(document: Dict[str, Any]) -> List[DetectedInterval]:
    return [DetectedInterval.from_dict(item) for item in document["intervals"]]
