from datetime import datetime
from typing import Any

from pydantic import BaseModel, Field


class RunManifest(BaseModel):
    config_echo: dict[str, Any]
    dataset_path: str
    dataset_hash: str
    seed: int
    chain_index: int = 0
    feature_names: list[str]
    n_observations: int
    artifact_paths: dict[str, str] = Field(default_factory=dict)
    versions: dict[str, str] = Field(default_factory=dict)
    wall_time_seconds: float = 0.0
    step_seconds: dict[str, float] = Field(default_factory=dict)
    finished_at: datetime | None = None
