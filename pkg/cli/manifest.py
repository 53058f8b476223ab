"""Run manifests: what was run, with which seeds and versions, and what it wrote."""

import json
import os
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from typing import Any

from core.build_info import BuildInfo
from core.file import atomic_write_text
from core.linalg import FormatError

DEFAULT_OUTPUT_DIR = "pamm_runs"
OUTPUT_DIR_ENV = "PAMM_OUTPUT_DIR"

def resolve_output_dir(flag_value: str | None) -> str:
    """--output-dir, then $PAMM_OUTPUT_DIR, then ./pamm_runs."""
    return flag_value or os.environ.get(OUTPUT_DIR_ENV) or DEFAULT_OUTPUT_DIR

def resolve_output_path(output_dir: str, path: str) -> str:
    """Relative output paths live inside the output directory."""
    return path if os.path.isabs(path) else os.path.join(output_dir, path)

def manifest_path(output_dir: str, subcommand: str) -> str:
    return os.path.join(output_dir, f"{subcommand}.manifest.json")

@dataclass
class RunManifest:
    """Everything needed to repeat a run."""

    subcommand: str
    argv: list[str]
    seeds: dict[str, Any] = field(default_factory=dict)
    outputs: list[str] = field(default_factory=list)
    versions: dict[str, str] = field(default_factory=BuildInfo.as_dict)
    started_at: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())
    wall_time_s: float = 0.0

    def save(self, output_dir: str) -> str:
        """Write the manifest beside the outputs and return its path."""
        path = manifest_path(output_dir, self.subcommand)
        atomic_write_text(path, json.dumps(asdict(self), indent=2) + "\n")
        return path

    @staticmethod
    def from_file(path: str) -> 'RunManifest':
        """Read a manifest written by `save`."""
        with open(path, "r", encoding="utf-8") as manifest_file:
            try:
                data: dict[str, Any] = json.load(manifest_file)
                return RunManifest(**data)
            except (json.JSONDecodeError, TypeError) as e:
                raise FormatError(f"Malformed manifest {path}: {e}") from e
