"""File helpers shared by the commands: overwrite protection, digests,
stable JSON documents and numeric CSV tables with line-accurate errors.
"""
from __future__ import annotations

import hashlib
import json
import re
from pathlib import Path
from typing import Any, Dict, Iterable, Sequence, Union

import numpy as np
import pandas as pd

from hifwatch.errors import OutputExistsError, WaveformFormatError
from hifwatch.tracing.logger import get_module_logger

logger = get_module_logger()

PathLike = Union[str, Path]

# 12 significant digits keep sample times at 2048 samples/cycle distinct
CSV_FLOAT_FORMAT = "%.12g"


def ensure_writable(path: PathLike, force: bool = False) -> Path:
    """Return ``path`` ready for writing, creating parent directories.

    Raises:
        OutputExistsError: the file exists and ``force`` is False.
    """
    target = Path(path)
    if target.exists() and not force:
        raise OutputExistsError(f"{target} exists; pass --force to overwrite")
    target.parent.mkdir(parents=True, exist_ok=True)
    return target


def sha256_file(path: PathLike) -> str:
    digest = hashlib.sha256()
    with Path(path).open("rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def sha256_arrays(*parts: Any) -> str:
    """Digest of arrays (as little-endian float64 bytes) and scalars (as repr)."""
    digest = hashlib.sha256()
    for part in parts:
        if isinstance(part, np.ndarray):
            digest.update(np.ascontiguousarray(part, dtype="<f8").tobytes())
        else:
            digest.update(repr(part).encode("utf-8"))
        digest.update(b"|")
    return digest.hexdigest()


def dumps_document(data: Dict[str, Any]) -> str:
    """Canonical JSON text: sorted keys, fixed separators, trailing newline."""
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_document(data: Dict[str, Any], path: PathLike, force: bool = False) -> Path:
    target = ensure_writable(path, force)
    target.write_text(dumps_document(data), encoding="utf-8")
    logger.debug(f"Wrote document {target}")
    return target


def read_document(path: PathLike) -> Dict[str, Any]:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise WaveformFormatError(f"invalid JSON document: {e.msg}", line=e.lineno, path=str(path)) from e


def write_csv(frame: pd.DataFrame, path: PathLike, force: bool = False) -> Path:
    target = ensure_writable(path, force)
    frame.to_csv(target, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
    logger.debug(f"Wrote {len(frame)} rows to {target}")
    return target


_LINE_PATTERN = re.compile(r"line (\d+)")


def read_numeric_csv(
    path: PathLike, required: Sequence[str], optional: Iterable[str] = ()
) -> pd.DataFrame:
    """Read a CSV whose header is ``required`` followed by any of ``optional``.

    Every cell must be a finite number. Errors name the 1-based file line
    (the header is line 1).

    Raises:
        WaveformFormatError: unreadable, empty, wrong header or bad cell.
    """
    source = str(path)
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, skip_blank_lines=False)
    except FileNotFoundError as e:
        raise WaveformFormatError("file not found", path=source) from e
    except pd.errors.EmptyDataError as e:
        raise WaveformFormatError("file is empty", line=1, path=source) from e
    except pd.errors.ParserError as e:
        match = _LINE_PATTERN.search(str(e))
        line = int(match.group(1)) if match else None
        raise WaveformFormatError("unexpected number of fields", line=line, path=source) from e

    columns = list(frame.columns)
    allowed_tail = list(optional)
    if columns[: len(required)] != list(required) or any(c not in allowed_tail for c in columns[len(required):]):
        expected = ",".join(required) + "".join(f"[,{c}]" for c in allowed_tail)
        raise WaveformFormatError(f"header must be '{expected}', got '{','.join(columns)}'", line=1, path=source)
    if frame.empty:
        raise WaveformFormatError("no data rows", line=2, path=source)

    numeric = {}
    for column in columns:
        values = pd.to_numeric(frame[column].str.strip(), errors="coerce").to_numpy(dtype=float)
        bad = np.flatnonzero(~np.isfinite(values))
        if bad.size:
            raise WaveformFormatError(
                f"column '{column}' holds a non-numeric or non-finite value", line=int(bad[0]) + 2, path=source
            )
        numeric[column] = values
    return pd.DataFrame(numeric, columns=columns)
