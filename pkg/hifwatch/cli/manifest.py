"""Run manifests written next to every command output."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from hifwatch.utils.file_utils import write_document

MANIFEST_SUFFIX = ".manifest.json"


class Command(str, Enum):
    SIMULATE = "simulate"
    DETECT = "detect"
    EVALUATE = "evaluate"
    REPORT = "report"


@dataclass
class RunManifest:
    """Provenance of one command run: what was read, what was written, which seed and tool version."""

    command: Command
    config_path: Optional[str]
    input_path: Optional[str]
    output_path: str
    seed: Optional[int]
    tool_version: str
    extra_outputs: List[str] = field(default_factory=list)

    @staticmethod
    def path_for(output: Union[str, Path]) -> Path:
        output = Path(output)
        return output.with_name(output.name + MANIFEST_SUFFIX)

    def as_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["command"] = self.command.value
        return data

    def write(self, force: bool = False) -> Path:
        return write_document(self.as_dict(), self.path_for(self.output_path), force=force)
