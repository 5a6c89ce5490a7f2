from pathlib import Path

import numpy as np
import structlog

from bayesmix.commands.fit import build_prior
from bayesmix.models.dataset import Dataset
from bayesmix.models.generative import generate_synthetic
from bayesmix.models.state import MixtureState
from bayesmix.schemas.fit import FitConfig
from bayesmix.services.data_loader import load_dataset, write_dataset

log = structlog.get_logger()


def cmd_simulate(
    reference_path: str | Path, config: FitConfig, N: int, out_path: str | Path
) -> tuple[Dataset, MixtureState]:
    """Draw a synthetic data set from the prior built on a reference data file.

    The true component of every observation is written to the ``class`` column.
    """
    reference = load_dataset(reference_path, config.columns, config.label_col)
    prior = build_prior(reference, config)
    synthetic, state = generate_synthetic(prior, N, np.random.default_rng(config.seed))
    synthetic = Dataset(
        y=synthetic.y,
        feature_names=reference.feature_names,
        true_labels=synthetic.true_labels,
    )
    write_dataset(synthetic, out_path)
    log.info("simulated", N=N, K=state.K, K_plus=state.K_plus, seed=config.seed)
    return synthetic, state
