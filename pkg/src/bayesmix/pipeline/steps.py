"""Single-site conditional updates of one Gibbs sweep.

Every step takes the current ``MixtureState``, updates it in place and returns it.
"""

import numpy as np
from scipy.special import gammaln

from bayesmix.distributions import (
    WishartParams,
    sample_categorical,
    sample_categorical_rows,
    sample_dirichlet,
    sample_inv_wishart,
    sample_mvnormal,
    sample_wishart,
    spd_inverse,
)
from bayesmix.errors import ConfigurationError, PreconditionError
from bayesmix.models.dataset import Dataset
from bayesmix.models.likelihood import component_log_densities
from bayesmix.models.prior import PriorConfig, RandomK
from bayesmix.models.state import MixtureState


def step_classify(data: Dataset, state: MixtureState, rng: np.random.Generator) -> MixtureState:
    with np.errstate(divide="ignore"):
        log_weights = np.log(state.eta)[None, :] + component_log_densities(
            data.y, state.mu, state.Sigma
        )
    state.S = sample_categorical_rows(log_weights, rng)
    state.refresh_counts()
    return state


def step_weights(state: MixtureState, gamma_K: float, rng: np.random.Generator) -> MixtureState:
    state.eta = sample_dirichlet(gamma_K + state.counts, rng)
    return state


def sample_component_mean(
    y_k: np.ndarray,
    Sigma_k: np.ndarray,
    b0: np.ndarray,
    B0_inv: np.ndarray,
    rng: np.random.Generator,
    size: int | None = None,
) -> np.ndarray:
    """mu_k | Sigma_k, y ~ N(b_k, B_k) for the observations ``y_k`` assigned to component k."""
    n_k = y_k.shape[0]
    Sigma_inv = spd_inverse(Sigma_k, "component covariance")
    B_k = spd_inverse(B0_inv + n_k * Sigma_inv, "posterior mean covariance B_k")
    b_k = B_k @ (B0_inv @ b0 + Sigma_inv @ y_k.sum(axis=0))
    return sample_mvnormal(b_k, B_k, rng, size=size)


def sample_component_covariance(
    y_k: np.ndarray,
    mu_k: np.ndarray,
    c0: float,
    C0: np.ndarray,
    rng: np.random.Generator,
    size: int | None = None,
) -> np.ndarray:
    """Sigma_k^-1 | mu_k, y ~ W(c0 + N_k/2, C0 + 1/2 sum (y_i - mu_k)(y_i - mu_k)^T)."""
    resid = y_k - mu_k
    C_k = C0 + 0.5 * resid.T @ resid
    return sample_inv_wishart(WishartParams(c0 + 0.5 * y_k.shape[0], C_k), rng, size=size)


def step_component_params(
    data: Dataset,
    state: MixtureState,
    prior: PriorConfig,
    rng: np.random.Generator,
    components: np.ndarray | None = None,
) -> MixtureState:
    """Update (mu_k, Sigma_k) for ``components`` (default: all K, empty ones from the prior)."""
    if components is None:
        components = np.arange(state.K)
    B0_inv = prior.B0_inv
    for k in components:
        y_k = data.y[state.S == k]
        state.mu[k] = sample_component_mean(y_k, state.Sigma[k], prior.b0, B0_inv, rng)
        state.Sigma[k] = sample_component_covariance(y_k, state.mu[k], prior.c0, state.C0, rng)
    return state


def step_hyper(
    state: MixtureState, prior: PriorConfig, rng: np.random.Generator, filled_only: bool = False
) -> MixtureState:
    relevant = np.flatnonzero(state.counts > 0) if filled_only else np.arange(state.K)
    if relevant.size == 0:
        raise PreconditionError("no components to condition the hyperparameter update on")
    precision_sum = sum(spd_inverse(state.Sigma[k], "component covariance") for k in relevant)
    params = WishartParams(prior.g0 + relevant.size * prior.c0, prior.G0 + precision_sum)
    state.C0 = sample_wishart(params, rng)
    return state


def log_posterior_K(counts: np.ndarray, prior: PriorConfig) -> tuple[np.ndarray, np.ndarray]:
    """Unnormalized log p(K | N_1..N_K+) over K = K+..K_max."""
    k_prior = prior.k_prior
    if not isinstance(k_prior, RandomK):
        raise ConfigurationError("sampling K requires a random-K prior")
    filled = counts[counts > 0]
    k_plus = filled.size
    if k_plus < 1:
        raise PreconditionError("sampling K needs at least one filled component")
    if k_prior.k_max < k_plus:
        raise ConfigurationError(f"k_max ({k_prior.k_max}) is below K_plus ({k_plus})")
    n = filled.sum()
    Ks = np.arange(k_plus, k_prior.k_max + 1)
    gammas = np.asarray(prior.gamma_spec.gamma_for(Ks), dtype=float)
    log_p = (
        gammaln(Ks + 1)
        - gammaln(Ks - k_plus + 1)
        + gammaln(Ks * gammas)
        - gammaln(Ks * gammas + n)
        + gammaln(filled[None, :] + gammas[:, None]).sum(axis=1)
        - k_plus * gammaln(1 + gammas)
        + k_prior.log_pmf(Ks)
    )
    return Ks, log_p


def step_sample_K(state: MixtureState, prior: PriorConfig, rng: np.random.Generator) -> int:
    Ks, log_p = log_posterior_K(state.counts, prior)
    probs = np.exp(log_p - log_p.max())
    return int(Ks[sample_categorical(probs, rng)])


def compact_filled(state: MixtureState) -> MixtureState:
    """Drop empty components; filled ones keep their relative order.

    Weights are carried over unnormalized and are redrawn later in the sweep.
    """
    filled = np.flatnonzero(state.counts > 0)
    if filled.size == state.K:
        return state
    relabel = np.full(state.K, -1, dtype=np.int64)
    relabel[filled] = np.arange(filled.size)
    state.eta = state.eta[filled]
    state.mu = state.mu[filled]
    state.Sigma = state.Sigma[filled]
    state.counts = state.counts[filled]
    state.S = relabel[state.S]
    return state


def step_add_empty(
    state: MixtureState, K: int, prior: PriorConfig, rng: np.random.Generator
) -> MixtureState:
    """Append K - K+ empty components drawn from their priors given the current C0."""
    n_new = K - state.K
    if n_new < 0:
        raise PreconditionError(f"cannot shrink from {state.K} to {K} components")
    if n_new == 0:
        return state
    mu_new = sample_mvnormal(prior.b0, prior.B0, rng, size=n_new)
    Sigma_new = sample_inv_wishart(WishartParams(prior.c0, state.C0), rng, size=n_new)
    state.eta = np.concatenate([state.eta, np.zeros(n_new)])
    state.mu = np.concatenate([state.mu, mu_new])
    state.Sigma = np.concatenate([state.Sigma, Sigma_new])
    state.counts = np.concatenate([state.counts, np.zeros(n_new, dtype=state.counts.dtype)])
    return state


def permute_labels_random(state: MixtureState, rng: np.random.Generator) -> MixtureState:
    perm = rng.permutation(state.K)
    state.eta = state.eta[perm]
    state.mu = state.mu[perm]
    state.Sigma = state.Sigma[perm]
    state.counts = state.counts[perm]
    state.S = np.argsort(perm)[state.S]
    return state
