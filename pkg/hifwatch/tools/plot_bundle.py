"""
Plot-ready CSV bundles built from the files a ``detect`` run leaves behind.

For a report ``<stem>.json`` the detector writes ``<stem>.scores.csv`` and
``<stem>.forcing.csv``; its manifest ``<stem>.json.manifest.json`` names the
waveform it read. The bundle holds four series, each downsampled by keeping
every d-th row:

- current.csv    time_s,i_primary
- forcing.csv    time_s,forcing_magnitude
- anomaly.csv    time_s,anomaly_score
- threshold.csv  time_s,threshold   (the threshold on the anomaly scale)
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Union

import pandas as pd

from hifwatch.detector.report_io import read_report, read_scores_csv
from hifwatch.errors import ParameterError, WaveformFormatError
from hifwatch.tracing.logger import get_module_logger
from hifwatch.utils.file_utils import read_document, read_numeric_csv, write_csv
from hifwatch.wavesim.waveform_io import read_waveform_csv

logger = get_module_logger()

SCORES_SUFFIX = ".scores.csv"


def companion_paths(scores_csv: Union[str, Path]) -> Dict[str, Path]:
    """Report, forcing and manifest paths next to a ``<stem>.scores.csv`` file."""
    path = Path(scores_csv)
    if not path.name.endswith(SCORES_SUFFIX):
        raise ParameterError(f"{path.name} does not follow the '<stem>{SCORES_SUFFIX}' naming")
    stem = path.with_name(path.name[: -len(SCORES_SUFFIX)])
    report = stem.with_name(stem.name + ".json")
    return {
        "report": report,
        "forcing": stem.with_name(stem.name + ".forcing.csv"),
        "manifest": report.with_name(report.name + ".manifest.json"),
    }


@dataclass
class PlotBundle:
    series: Dict[str, pd.DataFrame]

    @classmethod
    def from_scores(cls, scores_csv: Union[str, Path], waveform_csv: Optional[Union[str, Path]] = None) -> "PlotBundle":
        """Collect the bundle series for a score CSV and its companion files.

        The waveform is taken from ``waveform_csv`` or from the detect manifest.
        """
        scores = read_scores_csv(scores_csv)
        paths = companion_paths(scores_csv)
        report = read_report(paths["report"])
        theta = float(report["threshold"]["theta"])

        series: Dict[str, pd.DataFrame] = {
            "anomaly": scores[["time_s", "anomaly_score"]],
            "threshold": pd.DataFrame({"time_s": scores["time_s"], "threshold": -theta}),
        }
        forcing = read_numeric_csv(paths["forcing"], ("time_s", "forcing", "forcing_magnitude"))
        series["forcing"] = forcing[["time_s", "forcing_magnitude"]]

        if waveform_csv is None and paths["manifest"].exists():
            waveform_csv = read_document(paths["manifest"]).get("input_path")
        if waveform_csv is None:
            raise WaveformFormatError("no waveform given and no detect manifest found", path=str(paths["manifest"]))
        waveform = read_waveform_csv(waveform_csv)
        series["current"] = pd.DataFrame({"time_s": waveform.time, "i_primary": waveform.i_primary})
        return cls(series={name: series[name] for name in ("current", "forcing", "anomaly", "threshold")})

    def downsampled(self, factor: int) -> "PlotBundle":
        if factor < 1:
            raise ParameterError("downsample factor must be >= 1")
        return PlotBundle({name: frame.iloc[::factor] for name, frame in self.series.items()})

    def write(self, directory: Union[str, Path], force: bool = False) -> Dict[str, Path]:
        directory = Path(directory)
        written = {name: write_csv(frame, directory / f"{name}.csv", force=force) for name, frame in self.series.items()}
        logger.info(f"Plot bundle written to {directory}")
        return written
