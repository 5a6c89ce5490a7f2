from pathlib import Path

from pydantic import field_validator
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    log_level: str = "info"
    log_format: str = "json"

    # Default location for `fit` / `identify` artifacts when --out is not given.
    output_dir: Path = Path("runs")

    progress_every: int = 1000

    kmeans_restarts: int = 10
    kmeans_max_iter: int = 100

    k_max: int = 100
    vi_max_partitions: int = 2000

    max_workers: int | None = None

    # Check MixtureState consistency after every sweep; a violation aborts the chain.
    validate_states: bool = False

    @field_validator("log_format")
    @classmethod
    def _check_log_format(cls, value: str) -> str:
        if value not in ("json", "console"):
            raise ValueError("log_format must be 'json' or 'console'")
        return value

    model_config = {"env_prefix": "BAYESMIX_", "env_file": ".env", "env_file_encoding": "utf-8"}


settings = Settings()
