import asyncio
import time
import tomllib
from dataclasses import dataclass
from datetime import UTC, datetime
from pathlib import Path
from typing import Any

import structlog
from pydantic import ValidationError

from bayesmix.errors import ConfigurationError
from bayesmix.models.dataset import Dataset
from bayesmix.models.prior import PriorConfig, build_default_prior
from bayesmix.pipeline.executor import run_chain, run_chains
from bayesmix.pipeline.records import ChainOutput
from bayesmix.postprocess.kplus import kplus_distribution
from bayesmix.schemas.chain import SamplerMode
from bayesmix.schemas.fit import FitConfig
from bayesmix.schemas.manifest import RunManifest
from bayesmix.services.chain_store import write_chain
from bayesmix.services.data_loader import load_dataset
from bayesmix.services.manifest import file_sha256, tool_versions, write_manifest

log = structlog.get_logger()


def load_config_file(path: str | Path | None) -> dict[str, Any]:
    """Keys of a TOML file, either at top level or under a ``[fit]`` table."""
    if path is None:
        return {}
    try:
        with open(path, "rb") as f:
            values = tomllib.load(f)
    except FileNotFoundError:
        raise ConfigurationError(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as e:
        raise ConfigurationError(f"cannot parse {path}: {e}") from e
    return values.get("fit", values)


def resolve_config(file_values: dict[str, Any], overrides: dict[str, Any]) -> FitConfig:
    try:
        return FitConfig.resolve(file_values, overrides)
    except (ValidationError, ValueError) as e:
        raise ConfigurationError(str(e)) from e


def build_prior(data: Dataset, config: FitConfig) -> PriorConfig:
    return build_default_prior(
        data, c=config.c, phi=config.phi, gamma_spec=config.gamma_spec(), k_prior=config.k_prior()
    )


def _run(data: Dataset, prior: PriorConfig, config: FitConfig) -> list[ChainOutput]:
    initial_K = config.k if config.mode is SamplerMode.TELESCOPING else None
    chain_configs = [config.chain_config(i) for i in range(config.chains)]
    if config.chains == 1:
        return [run_chain(data, prior, chain_configs[0], config.mode, initial_K=initial_K)]
    return asyncio.run(run_chains(data, prior, chain_configs, config.mode, initial_K=initial_K))


@dataclass
class FitResult:
    out_dir: Path
    manifest: RunManifest
    kplus: dict[int, float]


def cmd_fit(data_path: str | Path, config: FitConfig, out_dir: str | Path) -> list[FitResult]:
    """Sample the posterior and persist draws, traces, assignments and a manifest per chain."""
    data_path, out_dir = Path(data_path), Path(out_dir)
    data = load_dataset(data_path, config.columns, config.label_col)
    prior = build_prior(data, config)
    dataset_hash = file_sha256(data_path)

    started = time.monotonic()
    chains = _run(data, prior, config)
    log.info("fit_finished", chains=len(chains), wall_time=time.monotonic() - started)

    results = []
    for index, chain in enumerate(chains):
        chain_dir = out_dir if config.chains == 1 else out_dir / f"chain_{index}"
        artifacts = write_chain(chain, chain_dir)
        manifest = RunManifest(
            config_echo=config.model_dump(mode="json"),
            dataset_path=str(data_path),
            dataset_hash=dataset_hash,
            seed=chain.seed,
            chain_index=index,
            feature_names=list(data.feature_names),
            n_observations=data.N,
            artifact_paths=artifacts,
            versions=tool_versions(),
            wall_time_seconds=chain.wall_time,
            step_seconds=chain.step_seconds,
            finished_at=datetime.now(UTC),
        )
        write_manifest(manifest, chain_dir)
        results.append(FitResult(chain_dir, manifest, kplus_distribution(chain)))
    return results

