import numpy as np
import structlog

from bayesmix.distributions import (
    WishartParams,
    sample_bnb,
    sample_categorical,
    sample_dirichlet,
    sample_inv_wishart,
    sample_mvnormal,
    sample_wishart,
)
from bayesmix.errors import InvalidParameterError
from bayesmix.models.dataset import Dataset
from bayesmix.models.prior import FixedK, PriorConfig, RandomK, SparseK
from bayesmix.models.state import MixtureState

log = structlog.get_logger()


def draw_K(prior: PriorConfig, rng: np.random.Generator) -> int:
    match prior.k_prior:
        case FixedK(K=K) | SparseK(K=K):
            return K
        case RandomK(a_l=a_l, a_pi=a_pi, b_pi=b_pi, k_max=k_max):
            while True:
                K = 1 + sample_bnb(a_l, a_pi, b_pi, rng)
                if K <= k_max:
                    return K


def generate_synthetic(
    prior: PriorConfig, N: int, rng: np.random.Generator
) -> tuple[Dataset, MixtureState]:
    """Draw parameters, assignments and data from the hierarchical generative model."""
    if N < 1:
        raise InvalidParameterError("N", "must be at least 1")
    K = draw_K(prior, rng)
    gamma = float(prior.gamma_spec.gamma_for(K))
    eta = sample_dirichlet(np.full(K, gamma), rng)
    C0 = sample_wishart(WishartParams(prior.g0, prior.G0), rng)
    Sigma = sample_inv_wishart(WishartParams(prior.c0, C0), rng, size=K)
    mu = sample_mvnormal(prior.b0, prior.B0, rng, size=K)
    S = sample_categorical(eta, rng, size=N)
    y = np.empty((N, prior.r))
    for k in range(K):
        members = np.flatnonzero(S == k)
        if members.size:
            y[members] = sample_mvnormal(mu[k], Sigma[k], rng, size=members.size)
    state = MixtureState.from_assignments(eta=eta, mu=mu, Sigma=Sigma, C0=C0, S=S)
    log.debug("synthetic_generated", N=N, K=K, K_plus=state.K_plus)
    return Dataset(y=y, true_labels=S + 1), state
