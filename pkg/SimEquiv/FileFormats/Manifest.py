"""Run manifests written next to every output"""
import json
from pathlib import Path
from typing import Dict, List, Optional

from pydantic import BaseModel

from FileFormats.Atomic import atomic_write


class RunManifest(BaseModel):
    command: str
    config_hash: Optional[str] = None
    seed: Optional[int] = None
    version: str
    duration_s: float
    outputs: List[str] = []
    parameters: Dict[str, object] = {}


def write_manifest(path, manifest: RunManifest) -> Path:
    payload = json.dumps(manifest.model_dump(mode="json"), indent=2, sort_keys=True) + "\n"
    return atomic_write(path, payload.encode())


def read_manifest(path) -> RunManifest:
    return RunManifest.model_validate_json(Path(path).read_text())
