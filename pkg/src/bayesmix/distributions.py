"""Samplers and densities for the distributions the Gibbs steps need.

Wishart and inverse Wishart use the rate-style parameterization

    f(Y | alpha, V) = |V|^alpha / Gamma_r(alpha) |Y|^(alpha - (r+1)/2) exp(-tr(V Y)),

which is the standard Wishart with ``df = 2 alpha`` and ``scale = (2 V)^-1``, so that
``E[Y] = alpha V^-1``. The translation happens in this module only.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats
from scipy.linalg import solve_triangular
from scipy.special import multigammaln

from bayesmix.errors import (
    DomainError,
    FactorizationError,
    InvalidParameterError,
    NumericalError,
)

LOG_2PI = math.log(2.0 * math.pi)
SYMMETRY_TOL = 1e-10


def symmetrize(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + np.swapaxes(a, -1, -2))


def cholesky(a: np.ndarray, what: str = "matrix") -> np.ndarray:
    """Lower Cholesky factor of the symmetrized matrix. Never regularizes."""
    try:
        return np.linalg.cholesky(symmetrize(a))
    except np.linalg.LinAlgError as e:
        raise FactorizationError(what) from e


def spd_inverse(a: np.ndarray, what: str = "matrix") -> np.ndarray:
    chol = cholesky(a, what)
    chol_inv = solve_triangular(chol, np.eye(a.shape[0]), lower=True)
    return chol_inv.T @ chol_inv


@dataclass(frozen=True)
class WishartParams:
    alpha: float
    V: np.ndarray
    chol: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        V = np.atleast_2d(np.asarray(self.V, dtype=float))
        if V.ndim != 2 or V.shape[0] != V.shape[1]:
            raise InvalidParameterError("V", f"expected a square matrix, got shape {V.shape}")
        scale = max(1.0, float(np.max(np.abs(V))))
        if np.max(np.abs(V - V.T)) > SYMMETRY_TOL * scale:
            raise InvalidParameterError("V", "matrix is not symmetric")
        r = V.shape[0]
        if not self.alpha > (r - 1) / 2:
            raise InvalidParameterError(
                "alpha", f"{self.alpha} must exceed (r-1)/2 = {(r - 1) / 2}"
            )
        V = symmetrize(V)
        object.__setattr__(self, "V", V)
        object.__setattr__(self, "chol", cholesky(V, "Wishart V"))

    @property
    def r(self) -> int:
        return self.V.shape[0]


def _bartlett_factor(df: float, r: int, rng: np.random.Generator, size: int | None) -> np.ndarray:
    """Lower-triangular A with A A^T ~ standard Wishart(df, I); df need not be an integer."""
    shape = () if size is None else (size,)
    a = np.zeros((*shape, r, r))
    diag = np.sqrt(rng.chisquare(df - np.arange(r), size=(*shape, r)))
    idx = np.arange(r)
    a[..., idx, idx] = diag
    rows, cols = np.tril_indices(r, k=-1)
    if rows.size:
        a[..., rows, cols] = rng.standard_normal((*shape, rows.size))
    return a


def sample_dirichlet(
    e: np.ndarray, rng: np.random.Generator, size: int | None = None
) -> np.ndarray:
    e = np.asarray(e, dtype=float)
    if e.ndim != 1 or e.size == 0:
        raise InvalidParameterError("e", "expected a non-empty vector")
    if not np.all(np.isfinite(e)) or np.any(e <= 0):
        raise InvalidParameterError("e", "all Dirichlet parameters must be positive and finite")
    if e.size == 1:
        return np.ones(1) if size is None else np.ones((size, 1))
    draws = rng.dirichlet(e, size=size)
    return draws / draws.sum(axis=-1, keepdims=True)


def sample_categorical(
    p: np.ndarray, rng: np.random.Generator, size: int | None = None
) -> int | np.ndarray:
    """Index (0-based) drawn with probability proportional to ``p``."""
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise InvalidParameterError("p", "expected a non-empty weight vector")
    if not np.all(np.isfinite(p)) or np.any(p < 0):
        raise InvalidParameterError("p", "weights must be finite and nonnegative")
    cum = np.cumsum(p)
    total = cum[-1]
    if total <= 0:
        raise InvalidParameterError("p", "at least one weight must be positive")
    u = rng.random(size) * total
    idx = np.searchsorted(cum, u, side="right")
    last_positive = int(np.flatnonzero(p > 0)[-1])
    idx = np.minimum(idx, last_positive)
    return int(idx) if size is None else idx


def sample_categorical_rows(log_weights: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """One draw per row of an (n, K) matrix of unnormalized log weights.

    Rows are normalized after subtracting the row maximum. A row whose weights are all -inf
    cannot be normalized and raises with the row index attached.
    """
    row_max = np.max(log_weights, axis=1)
    bad = np.flatnonzero(~np.isfinite(row_max))
    if bad.size:
        raise NumericalError("all component densities underflow", observation=int(bad[0]))
    probs = np.exp(log_weights - row_max[:, None])
    cum = np.cumsum(probs, axis=1)
    u = rng.random(log_weights.shape[0]) * cum[:, -1]
    idx = (cum > u[:, None]).argmax(axis=1)
    return idx


def sample_mvnormal(
    b: np.ndarray, B: np.ndarray, rng: np.random.Generator, size: int | None = None
) -> np.ndarray:
    b = np.asarray(b, dtype=float)
    chol = cholesky(np.atleast_2d(B), "normal covariance")
    shape = (b.size,) if size is None else (size, b.size)
    z = rng.standard_normal(shape)
    return b + z @ chol.T


def sample_wishart(
    params: WishartParams, rng: np.random.Generator, size: int | None = None
) -> np.ndarray:
    # scale (2V)^-1 = U U^T with U = L_V^-T / sqrt(2)
    a = _bartlett_factor(2.0 * params.alpha, params.r, rng, size)
    u = solve_triangular(params.chol, np.eye(params.r), lower=True).T / math.sqrt(2.0)
    ua = u @ a
    return symmetrize(ua @ np.swapaxes(ua, -1, -2))


def sample_inv_wishart(
    params: WishartParams, rng: np.random.Generator, size: int | None = None
) -> np.ndarray:
    """Inverse of a ``sample_wishart`` draw, computed without forming the Wishart matrix.

    With Y = U A A^T U^T and U^-1 = sqrt(2) L_V^T, Y^-1 = 2 G^T G where G = A^-1 L_V^T.
    """
    a = _bartlett_factor(2.0 * params.alpha, params.r, rng, size)
    chol_v = params.chol
    if size is None:
        g = solve_triangular(a, chol_v.T, lower=True)
    else:
        g = np.stack([solve_triangular(a_i, chol_v.T, lower=True) for a_i in a])
    return symmetrize(2.0 * np.swapaxes(g, -1, -2) @ g)


def log_multivariate_gamma(alpha: float, r: int) -> float:
    if alpha <= (r - 1) / 2:
        raise DomainError(f"multivariate gamma undefined for alpha={alpha}, r={r}")
    return float(multigammaln(alpha, r))


def log_mvnormal_density_rows(y: np.ndarray, mu: np.ndarray, Sigma: np.ndarray) -> np.ndarray:
    y = np.atleast_2d(y)
    chol = cholesky(np.atleast_2d(Sigma), "component covariance")
    z = solve_triangular(chol, (y - mu).T, lower=True)
    half_logdet = np.sum(np.log(np.diag(chol)))
    return -0.5 * np.sum(z * z, axis=0) - half_logdet - 0.5 * y.shape[1] * LOG_2PI


def log_mvnormal_density(y: np.ndarray, mu: np.ndarray, Sigma: np.ndarray) -> float:
    y = np.atleast_1d(np.asarray(y, dtype=float))
    mu = np.atleast_1d(np.asarray(mu, dtype=float))
    if y.shape != mu.shape:
        raise InvalidParameterError("mu", f"shape {mu.shape} does not match y {y.shape}")
    return float(log_mvnormal_density_rows(y[None, :], mu, Sigma)[0])


def _logdet(chol: np.ndarray) -> float:
    return 2.0 * float(np.sum(np.log(np.diag(chol))))


def wishart_log_density(Y: np.ndarray, params: WishartParams) -> float:
    r, alpha = params.r, params.alpha
    chol_y = cholesky(Y, "Wishart argument")
    return (
        alpha * _logdet(params.chol)
        - log_multivariate_gamma(alpha, r)
        + (alpha - (r + 1) / 2) * _logdet(chol_y)
        - float(np.trace(params.V @ Y))
    )


def inv_wishart_log_density(Y: np.ndarray, params: WishartParams) -> float:
    r, alpha = params.r, params.alpha
    y_inv = spd_inverse(Y, "inverse Wishart argument")
    chol_y = cholesky(Y, "inverse Wishart argument")
    return (
        alpha * _logdet(params.chol)
        - log_multivariate_gamma(alpha, r)
        - (alpha + (r + 1) / 2) * _logdet(chol_y)
        - float(np.trace(params.V @ y_inv))
    )


def _check_bnb(a_l: float, a_pi: float, b_pi: float) -> None:
    for name, value in (("a_l", a_l), ("a_pi", a_pi), ("b_pi", b_pi)):
        if not (math.isfinite(value) and value > 0):
            raise DomainError(f"BNB parameter {name} must be positive, got {value}")


def bnb_log_pmf(
    k_minus_1: int | np.ndarray, a_l: float, a_pi: float, b_pi: float
) -> float | np.ndarray:
    """log P(X = x) for the beta-negative-binomial X ~ BNB(a_l, a_pi, b_pi).

    P(X=x) = Gamma(a_l+x) / (x! Gamma(a_l)) * B(a_pi+a_l, b_pi+x) / B(a_pi, b_pi)
    """
    _check_bnb(a_l, a_pi, b_pi)
    x = np.asarray(k_minus_1)
    if np.any(x < 0):
        raise DomainError("BNB support is the nonnegative integers")
    out = stats.betanbinom.logpmf(x, a_l, a_pi, b_pi)
    return float(out) if np.ndim(out) == 0 else out


def sample_bnb(a_l: float, a_pi: float, b_pi: float, rng: np.random.Generator) -> int:
    _check_bnb(a_l, a_pi, b_pi)
    p = rng.beta(a_pi, b_pi)
    return int(rng.negative_binomial(a_l, p))
