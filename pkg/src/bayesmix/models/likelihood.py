import numpy as np
from scipy.special import logsumexp

from bayesmix.distributions import log_mvnormal_density_rows
from bayesmix.errors import PreconditionError
from bayesmix.models.dataset import Dataset
from bayesmix.models.state import MixtureState


def component_log_densities(y: np.ndarray, mu: np.ndarray, Sigma: np.ndarray) -> np.ndarray:
    """(N, K) matrix of log f_N(y_i | mu_k, Sigma_k)."""
    return np.column_stack(
        [log_mvnormal_density_rows(y, mu[k], Sigma[k]) for k in range(mu.shape[0])]
    )


def _check_dims(data: Dataset, state: MixtureState) -> None:
    if state.mu.shape[1] != data.r:
        raise PreconditionError(f"state has dimension {state.mu.shape[1]}, data has {data.r}")


def mixture_log_likelihood(data: Dataset, state: MixtureState) -> float:
    _check_dims(data, state)
    with np.errstate(divide="ignore"):
        terms = np.log(state.eta)[None, :] + component_log_densities(data.y, state.mu, state.Sigma)
    # sorted rows make the value independent of component order
    return float(np.sum(logsumexp(np.sort(terms, axis=1), axis=1)))


def complete_data_log_likelihood(data: Dataset, state: MixtureState) -> float:
    _check_dims(data, state)
    if state.S.shape[0] != data.N:
        raise PreconditionError("assignment vector length does not match data")
    dens = component_log_densities(data.y, state.mu, state.Sigma)
    rows = np.arange(data.N)
    with np.errstate(divide="ignore"):
        return float(np.sum(np.log(state.eta[state.S]) + dens[rows, state.S]))
