from dataclasses import dataclass

import numpy as np

from bayesmix.distributions import bnb_log_pmf, spd_inverse
from bayesmix.errors import ConfigurationError, DegeneratePriorError, InvalidParameterError
from bayesmix.models.dataset import Dataset


@dataclass(frozen=True)
class FixedGamma:
    gamma: float

    def gamma_for(self, K: int | np.ndarray) -> float | np.ndarray:
        return self.gamma if np.ndim(K) == 0 else np.full(np.shape(K), self.gamma)


@dataclass(frozen=True)
class DynamicGamma:
    """gamma_K = alpha / K."""

    alpha: float

    def gamma_for(self, K: int | np.ndarray) -> float | np.ndarray:
        return self.alpha / np.asarray(K, dtype=float) if np.ndim(K) else self.alpha / K


GammaSpec = FixedGamma | DynamicGamma


@dataclass(frozen=True)
class FixedK:
    K: int

    def log_pmf(self, K: np.ndarray) -> np.ndarray:
        return np.where(np.asarray(K) == self.K, 0.0, -np.inf)


@dataclass(frozen=True)
class SparseK:
    """Deliberately overfitting K combined with a small fixed gamma."""

    K: int
    gamma: float = 0.01

    def log_pmf(self, K: np.ndarray) -> np.ndarray:
        return np.where(np.asarray(K) == self.K, 0.0, -np.inf)


@dataclass(frozen=True)
class RandomK:
    """Beta-negative-binomial prior on K - 1, truncated at ``k_max``."""

    a_l: float = 1.0
    a_pi: float = 4.0
    b_pi: float = 3.0
    k_max: int = 100

    def log_pmf(self, K: np.ndarray) -> np.ndarray:
        K = np.asarray(K)
        inside = (K >= 1) & (K <= self.k_max)
        values = bnb_log_pmf(np.clip(K - 1, 0, None), self.a_l, self.a_pi, self.b_pi)
        return np.where(inside, values, -np.inf)


KPrior = FixedK | SparseK | RandomK


@dataclass(frozen=True, eq=False)
class PriorConfig:
    gamma_spec: GammaSpec
    b0: np.ndarray
    B0: np.ndarray
    c: float
    phi: float
    c0: float
    g0: float
    C0_init: np.ndarray
    G0: np.ndarray
    k_prior: KPrior
    S_diag: np.ndarray

    @property
    def r(self) -> int:
        return self.b0.shape[0]

    @property
    def B0_inv(self) -> np.ndarray:
        return spd_inverse(self.B0, "B0")

    @property
    def initial_K(self) -> int:
        match self.k_prior:
            case FixedK(K=K) | SparseK(K=K):
                return K
            case RandomK():
                raise ConfigurationError("a random-K prior has no fixed component count")


def default_gamma_spec(k_prior: KPrior) -> GammaSpec:
    match k_prior:
        case SparseK(gamma=gamma):
            return FixedGamma(gamma)
        case RandomK():
            return DynamicGamma(0.5)
        case _:
            return FixedGamma(1.0)


def make_prior(
    b0: np.ndarray,
    B0: np.ndarray,
    S: np.ndarray,
    c: float = 2.5,
    phi: float = 0.75,
    gamma_spec: GammaSpec | None = None,
    k_prior: KPrior | None = None,
) -> PriorConfig:
    """Hierarchical Normal / inverse-Wishart / Wishart prior.

    c0 = c + (r+1)/2, g0 = 1 + (r-1)/2, C0 = c phi S and G0 = g0 C0^-1, which puts the prior
    mean of every Sigma_k at phi S.
    """
    if not c > 0:
        raise InvalidParameterError("c", f"must be positive, got {c}")
    if not phi > 0:
        raise InvalidParameterError("phi", f"must be positive, got {phi}")
    b0 = np.asarray(b0, dtype=float)
    r = b0.shape[0]
    S_diag = np.diag(np.asarray(S, dtype=float)) if np.ndim(S) == 2 else np.asarray(S, float)
    k_prior = k_prior or FixedK(3)
    if isinstance(k_prior, RandomK) and k_prior.k_max < 1:
        raise ConfigurationError("k_max must be at least 1")
    c0 = c + (r + 1) / 2
    g0 = 1 + (r - 1) / 2
    C0_init = c * phi * np.diag(S_diag)
    return PriorConfig(
        gamma_spec=gamma_spec or default_gamma_spec(k_prior),
        b0=b0,
        B0=np.asarray(B0, dtype=float),
        c=c,
        phi=phi,
        c0=c0,
        g0=g0,
        C0_init=C0_init,
        G0=g0 * spd_inverse(C0_init, "C0"),
        k_prior=k_prior,
        S_diag=S_diag,
    )


def build_default_prior(
    data: Dataset,
    c: float = 2.5,
    phi: float = 0.75,
    gamma_spec: GammaSpec | None = None,
    k_prior: KPrior | None = None,
) -> PriorConfig:
    """Scale-invariant default prior: b0 = column medians, B0 = diag(range^2),
    S = diag of the empirical covariance (denominator N - 1)."""
    if data.N < 2:
        raise DegeneratePriorError("at least two observations are needed to build the prior")
    y = data.y
    ranges = y.max(axis=0) - y.min(axis=0)
    for j, width in enumerate(ranges):
        if width == 0:
            name = data.feature_names[j]
            raise DegeneratePriorError(f"column '{name}' is constant", column=name)
    S_diag = np.var(y, axis=0, ddof=1)
    return make_prior(
        b0=np.median(y, axis=0),
        B0=np.diag(ranges**2),
        S=S_diag,
        c=c,
        phi=phi,
        gamma_spec=gamma_spec,
        k_prior=k_prior,
    )
