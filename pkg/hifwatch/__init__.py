"""hifwatch: arcing high-impedance fault simulation and detection on substation currents."""

__version__ = "0.1.0"

from .errors import (
    HifwatchError,
    ParameterError,
    PipelineError,
    RecordMismatchError,
    SampleRateMismatchError,
    WaveformFormatError,
)
from .config import DetectorConfig, HavokConfig, S2gConfig, SettingsError, SimConfig
from .tracing import LoggingContext, get_logger, get_module_logger, setup_logging
from .wavesim import EventSchedule, HifParams, RlParams, ScheduledEvent, Waveform, synthesize
from .config.run_config import RunConfig, load_run_config
from .detector import DetectionReport, evaluate, run_pipeline

__all__ = [
    "__version__",
    "HifwatchError",
    "ParameterError",
    "PipelineError",
    "RecordMismatchError",
    "SampleRateMismatchError",
    "WaveformFormatError",
    "SettingsError",
    "SimConfig",
    "HavokConfig",
    "S2gConfig",
    "DetectorConfig",
    "RunConfig",
    "load_run_config",
    "setup_logging",
    "get_logger",
    "get_module_logger",
    "LoggingContext",
    "EventSchedule",
    "HifParams",
    "RlParams",
    "ScheduledEvent",
    "Waveform",
    "synthesize",
    "DetectionReport",
    "evaluate",
    "run_pipeline",
]
