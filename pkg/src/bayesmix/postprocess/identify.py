from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
import pandas as pd
import structlog

from bayesmix.clustering import kmeans
from bayesmix.errors import IdentificationError, PreconditionError
from bayesmix.postprocess.kplus import FilteredDraws

log = structlog.get_logger()

Functional = Callable[[FilteredDraws], np.ndarray]

FUNCTIONALS: dict[str, Functional] = {
    "mu": lambda draws: draws.mu,
    "mu1": lambda draws: draws.mu[:, :, :1],
}


@dataclass
class IdentifiedDraws:
    """Draws of the kept sweeps with components reordered to identified cluster labels.

    ``permutations[m, j]`` is the cluster label (0-based) of the j-th component of kept sweep m.
    Clusters are numbered by ascending posterior mean size.
    """

    K_plus: int
    kept_sweeps: np.ndarray
    iters: np.ndarray
    permutations: np.ndarray
    non_permutation_rate: float
    eta: np.ndarray
    mu: np.ndarray
    Sigma: np.ndarray
    N_k: np.ndarray
    S: np.ndarray | None
    centers: np.ndarray

    def to_frame(self, feature_names: tuple[str, ...] | list[str] | None = None) -> pd.DataFrame:
        """Long format, one row per kept sweep and cluster."""
        M, k, r = self.mu.shape
        names = list(feature_names) if feature_names else [f"y{j + 1}" for j in range(r)]
        columns: dict[str, np.ndarray] = {
            "iter": np.repeat(self.iters, k),
            "cluster": np.tile(np.arange(1, k + 1), M),
            "eta": self.eta.ravel(),
        }
        for j, name in enumerate(names):
            columns[f"mu_{name}"] = self.mu[:, :, j].ravel()
        columns["N_k"] = self.N_k.ravel()
        return pd.DataFrame(columns)


@dataclass
class PosteriorSummary:
    eta: np.ndarray
    mu: np.ndarray
    Sigma: np.ndarray
    N_k: np.ndarray
    n_kept: int

    def to_frame(self, feature_names: tuple[str, ...] | list[str] | None = None) -> pd.DataFrame:
        """One column per cluster; rows for weight, mean size, means and covariance entries."""
        k, r = self.mu.shape
        names = list(feature_names) if feature_names else [f"y{j + 1}" for j in range(r)]
        rows: dict[str, np.ndarray] = {"eta": self.eta, "N_k": self.N_k}
        for j, name in enumerate(names):
            rows[f"mu_{name}"] = self.mu[:, j]
        for a in range(r):
            for b in range(a + 1):
                rows[f"Sigma_{names[a]}_{names[b]}"] = self.Sigma[:, a, b]
        return pd.DataFrame(rows, index=[f"cluster_{i + 1}" for i in range(k)]).T


def _resolve_functional(functional: str | Functional) -> Functional:
    if callable(functional):
        return functional
    try:
        return FUNCTIONALS[functional]
    except KeyError:
        raise PreconditionError(
            f"unknown ppr functional '{functional}', expected one of {sorted(FUNCTIONALS)}"
        ) from None


def _apply(labels: np.ndarray, values: np.ndarray) -> np.ndarray:
    out = np.empty_like(values)
    rows = np.arange(labels.shape[0])[:, None]
    out[rows, labels] = values
    return out


def ppr_identify(
    draws: FilteredDraws, rng: np.random.Generator, functional: str | Functional = "mu"
) -> IdentifiedDraws:
    """Relabel sweeps by clustering the pooled component draws into K+ groups.

    A sweep is kept only when its K+ components fall into K+ distinct groups; the share of
    dropped sweeps is the non-permutation rate.
    """
    k = draws.K_plus
    points = np.asarray(_resolve_functional(functional)(draws), dtype=float)
    if points.ndim == 2:
        points = points[:, :, None]
    if points.shape[:2] != (draws.M, k):
        raise PreconditionError(
            f"functional returned shape {points.shape}, expected ({draws.M}, {k}, d)"
        )
    result = kmeans(points.reshape(draws.M * k, -1), k, rng)
    if result.n_nonempty < k:
        raise IdentificationError(f"k-means found {result.n_nonempty} groups for K_plus = {k}")

    labels = result.labels.reshape(draws.M, k)
    is_perm = np.all(np.sort(labels, axis=1) == np.arange(k), axis=1)
    kept = np.flatnonzero(is_perm)
    if kept.size == 0:
        raise IdentificationError("no sweep maps onto a permutation of the clusters")
    labels = labels[kept]

    # renumber clusters by ascending mean size, stable in the k-means label
    mean_size = _apply(labels, draws.N_k[kept]).mean(axis=0)
    order = np.argsort(mean_size, kind="stable")
    rank = np.argsort(order)
    perms = rank[labels]

    S = None
    if draws.S is not None:
        S = np.take_along_axis(perms, draws.S[kept], axis=1)
    rate = 1.0 - kept.size / draws.M
    log.info("ppr_identified", K_plus=k, kept=int(kept.size), non_permutation_rate=rate)
    return IdentifiedDraws(
        K_plus=k,
        kept_sweeps=draws.sweep_indices[kept],
        iters=draws.iters[kept],
        permutations=perms,
        non_permutation_rate=rate,
        eta=_apply(perms, draws.eta[kept]),
        mu=_apply(perms, draws.mu[kept]),
        Sigma=_apply(perms, draws.Sigma[kept]),
        N_k=_apply(perms, draws.N_k[kept]),
        S=S,
        centers=result.centers[order],
    )


def posterior_summary(identified: IdentifiedDraws) -> PosteriorSummary:
    if identified.kept_sweeps.size == 0:
        raise PreconditionError("no kept sweeps to summarize")
    return PosteriorSummary(
        eta=identified.eta.mean(axis=0),
        mu=identified.mu.mean(axis=0),
        Sigma=identified.Sigma.mean(axis=0),
        N_k=identified.N_k.mean(axis=0),
        n_kept=int(identified.kept_sweeps.size),
    )
