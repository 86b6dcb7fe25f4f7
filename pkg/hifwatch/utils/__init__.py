"""File and digest helpers."""

from .file_utils import (
    dumps_document,
    ensure_writable,
    read_document,
    read_numeric_csv,
    sha256_arrays,
    sha256_file,
    write_csv,
    write_document,
)
from .smoothing import moving_average

__all__ = [
    "moving_average",
    "dumps_document",
    "ensure_writable",
    "read_document",
    "read_numeric_csv",
    "sha256_arrays",
    "sha256_file",
    "write_csv",
    "write_document",
]
