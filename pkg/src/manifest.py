"""Run manifests and deterministic JSON output."""

import hashlib
import json
import math
import time
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Union

import numpy as np

from src.config import Config

MANIFEST_NAME = "manifest.json"


def json_safe(value: Any) -> Any:
    """Convert to plain JSON types: NaN -> null, ±inf -> "inf"/"-inf"."""
    if isinstance(value, dict):
        return {str(k): json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_safe(v) for v in value]
    if isinstance(value, np.ndarray):
        return json_safe(value.tolist())
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return None
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, Enum):
        return value.value
    return value


def write_json(path: Union[str, Path], payload: Any) -> Path:
    path = Path(path)
    text = json.dumps(json_safe(payload), indent=2, sort_keys=True, allow_nan=False, ensure_ascii=False)
    path.write_text(text + "\n", encoding="utf-8")
    return path


def sha256_file(path: Union[str, Path]) -> str:
    digest = hashlib.sha256()
    with Path(path).open("rb") as handle:
        for chunk in iter(lambda: handle.read(8192), b""):
            digest.update(chunk)
    return digest.hexdigest()


@dataclass
class RunManifest:
    """What ran, on which inputs, with which flags."""

    subcommand: str
    flags: Dict[str, Any]
    seed: Optional[int]
    inputs: Dict[str, str] = field(default_factory=dict)
    version: str = Config.VERSION
    started_at: float = field(default_factory=time.time)
    duration_seconds: Optional[float] = None

    def add_inputs(self, paths: Iterable[Union[str, Path]]) -> None:
        for path in paths:
            path = Path(path)
            if path.is_dir():
                for child in sorted(path.glob("*.json")) + sorted(path.glob("*.csv")):
                    if child.name != MANIFEST_NAME:
                        self.inputs[str(child)] = sha256_file(child)
            else:
                self.inputs[str(path)] = sha256_file(path)

    def finish(self) -> None:
        self.duration_seconds = round(time.time() - self.started_at, 3)

    def to_dict(self) -> dict:
        return {
            "subcommand": self.subcommand,
            "flags": self.flags,
            "seed": self.seed,
            "inputs": self.inputs,
            "version": self.version,
            "started_at": self.started_at,
            "duration_seconds": self.duration_seconds,
        }

    def write(self, out_dir: Union[str, Path]) -> Path:
        return write_json(Path(out_dir) / MANIFEST_NAME, self.to_dict())
