"""Waveform CSV files: ``time_s,i_primary[,label]``."""

from __future__ import annotations

from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from hifwatch.errors import WaveformFormatError
from hifwatch.tracing.logger import get_module_logger
from hifwatch.utils.file_utils import read_numeric_csv, write_csv

from .models import Waveform

logger = get_module_logger()

WAVEFORM_COLUMNS = ("time_s", "i_primary")
LABEL_COLUMN = "label"

# tolerated deviation of a time step from the nominal step, as a fraction of it
_STEP_TOLERANCE = 1e-3


def write_waveform_csv(
    waveform: Waveform, path: Union[str, Path], include_labels: bool = True, force: bool = False
) -> Path:
    frame = pd.DataFrame({"time_s": waveform.time, "i_primary": waveform.i_primary})
    if include_labels and waveform.labels is not None:
        frame[LABEL_COLUMN] = waveform.labels.astype(np.int64)
    return write_csv(frame, path, force=force)


def read_waveform_csv(path: Union[str, Path]) -> Waveform:
    """Parse a waveform CSV and infer the sample rate from the time column.

    Raises:
        WaveformFormatError: header, cell, label or time-grid problem, with its line.
    """
    frame = read_numeric_csv(path, WAVEFORM_COLUMNS, optional=(LABEL_COLUMN,))
    source = str(path)
    time = frame["time_s"].to_numpy()
    if time.size < 2:
        raise WaveformFormatError("at least two samples are needed to infer the sample rate", line=2, path=source)
    steps = np.diff(time)
    not_increasing = np.flatnonzero(steps <= 0)
    if not_increasing.size:
        raise WaveformFormatError("time must increase strictly", line=int(not_increasing[0]) + 3, path=source)
    nominal = (time[-1] - time[0]) / (time.size - 1)
    irregular = np.flatnonzero(np.abs(steps - nominal) > _STEP_TOLERANCE * nominal)
    if irregular.size:
        raise WaveformFormatError("time grid is not uniform", line=int(irregular[0]) + 3, path=source)

    labels = None
    if LABEL_COLUMN in frame.columns:
        raw = frame[LABEL_COLUMN].to_numpy()
        bad = np.flatnonzero((raw != 0) & (raw != 1))
        if bad.size:
            raise WaveformFormatError("label must be 0 or 1", line=int(bad[0]) + 2, path=source)
        labels = raw.astype(np.uint8)

    waveform = Waveform(
        sample_rate=float(1.0 / nominal),
        t0=float(time[0]),
        channels={"i_primary": frame["i_primary"].to_numpy()},
        labels=labels,
    )
    logger.info(f"Read {waveform.n_samples} samples at {waveform.sample_rate:.3f} Hz from {source}")
    return waveform
