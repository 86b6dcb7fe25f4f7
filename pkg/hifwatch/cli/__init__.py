"""Command-line entry point."""

from .main import build_parser, exit_code_for, main
from .manifest import Command, RunManifest

__all__ = ["main", "build_parser", "exit_code_for", "Command", "RunManifest"]
