from bayesmix.models.dataset import Dataset
from bayesmix.models.generative import generate_synthetic
from bayesmix.models.likelihood import complete_data_log_likelihood, mixture_log_likelihood
from bayesmix.models.prior import (
    DynamicGamma,
    FixedGamma,
    FixedK,
    PriorConfig,
    RandomK,
    SparseK,
    build_default_prior,
    make_prior,
)
from bayesmix.models.state import MixtureState

__all__ = [
    "Dataset",
    "DynamicGamma",
    "FixedGamma",
    "FixedK",
    "MixtureState",
    "PriorConfig",
    "RandomK",
    "SparseK",
    "build_default_prior",
    "complete_data_log_likelihood",
    "generate_synthetic",
    "make_prior",
    "mixture_log_likelihood",
]
