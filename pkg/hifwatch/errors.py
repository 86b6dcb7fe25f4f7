"""Exception hierarchy shared by the simulation and detection modules.

Configuration problems are reported through ``hifwatch.config.SettingsError``
and its subclasses; everything raised while computing lives here.
"""

from __future__ import annotations

from typing import Any, Dict, Optional


class HifwatchError(Exception):
    """Base class for runtime errors raised by hifwatch."""


class ParameterError(HifwatchError, ValueError):
    """An argument lies outside the range an operation accepts."""


class NonFiniteSampleError(HifwatchError, ValueError):
    """A series contains NaN or infinity."""

    def __init__(self, index: int, value: float):
        self.index = int(index)
        self.value = value
        super().__init__(f"non-finite sample {value!r} at index {self.index}")


class SingularArcError(HifwatchError, ValueError):
    """Arc conductance reached zero or a negative value."""


class NumericalError(HifwatchError):
    """A linear-algebra routine failed to converge."""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        self.diagnostics = dict(diagnostics or {})
        details = ", ".join(f"{k}={v}" for k, v in sorted(self.diagnostics.items()))
        super().__init__(f"{message} ({details})" if details else message)


class DegenerateInputError(HifwatchError, ValueError):
    """Input carries no information to work with (e.g. an all-zero spectrum)."""


class ScheduleError(HifwatchError, ValueError):
    """An event schedule does not fit the simulated record."""


class PathIndexError(HifwatchError, IndexError):
    """A query path runs past the end of the node sequence."""


class PipelineError(HifwatchError):
    """Wraps a failure inside one detection stage."""

    def __init__(self, stage: str, cause: BaseException):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage '{stage}' failed: {cause}")


class WaveformFormatError(HifwatchError, ValueError):
    """A waveform or score CSV file cannot be parsed."""

    def __init__(self, message: str, line: Optional[int] = None, path: Optional[str] = None):
        self.line = line
        self.path = path
        where = f"{path}:" if path else ""
        where += f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")


class SampleRateMismatchError(HifwatchError, ValueError):
    """The waveform sample rate differs from the configured one."""

    def __init__(self, actual: float, expected: float):
        self.actual = actual
        self.expected = expected
        super().__init__(f"waveform sample rate {actual:.6f} Hz does not match configured {expected:.6f} Hz")


class RecordMismatchError(HifwatchError, ValueError):
    """A detection report and an event schedule describe different records."""


class OutputExistsError(HifwatchError, FileExistsError):
    """An output file exists and overwriting was not requested."""
