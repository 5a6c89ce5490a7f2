import numpy as np
import structlog

from bayesmix.clustering import kmeans
from bayesmix.errors import InvalidParameterError
from bayesmix.models.dataset import Dataset
from bayesmix.models.prior import PriorConfig
from bayesmix.models.state import MixtureState

log = structlog.get_logger()


def init_from_kmeans(
    data: Dataset, K: int, prior: PriorConfig, rng: np.random.Generator
) -> MixtureState:
    """Starting state from a k-means partition of the raw data.

    Means are the cluster means, every covariance is ``phi * diag(S)`` and weights are 1/K.
    """
    if K < 1:
        raise InvalidParameterError("K", "must be at least 1")
    result = kmeans(data.y, K, rng)
    Sigma = np.broadcast_to(prior.phi * np.diag(prior.S_diag), (K, data.r, data.r)).copy()
    state = MixtureState.from_assignments(
        eta=np.full(K, 1.0 / K),
        mu=result.centers.copy(),
        Sigma=Sigma,
        C0=prior.C0_init.copy(),
        S=result.labels,
    )
    log.debug("chain_initialized", K=K, K_plus=state.K_plus, inertia=result.inertia)
    return state
