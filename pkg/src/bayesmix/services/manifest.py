import hashlib
import os
from importlib import metadata
from pathlib import Path

import numpy as np
import pandas as pd
import scipy
import structlog

from bayesmix.errors import DataIngestionError
from bayesmix.schemas.manifest import RunManifest

log = structlog.get_logger()

MANIFEST_NAME = "manifest.json"


def file_sha256(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for block in iter(lambda: f.read(1 << 16), b""):
            digest.update(block)
    return digest.hexdigest()


def tool_versions() -> dict[str, str]:
    try:
        own = metadata.version("bayesmix")
    except metadata.PackageNotFoundError:
        own = "unknown"
    return {
        "bayesmix": own,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "pandas": pd.__version__,
    }


def write_manifest(manifest: RunManifest, out_dir: str | Path) -> Path:
    """Write ``manifest.json`` atomically (temp file + rename)."""
    path = Path(out_dir) / MANIFEST_NAME
    tmp = path.with_suffix(".json.tmp")
    tmp.write_text(manifest.model_dump_json(indent=2), encoding="utf-8")
    os.replace(tmp, path)
    log.info("artifact_written", path=str(path))
    return path


def read_manifest(run_dir: str | Path) -> RunManifest | None:
    path = Path(run_dir) / MANIFEST_NAME
    if not path.exists():
        return None
    try:
        return RunManifest.model_validate_json(path.read_text(encoding="utf-8"))
    except ValueError as e:
        raise DataIngestionError(str(path), f"invalid manifest: {e}") from e
