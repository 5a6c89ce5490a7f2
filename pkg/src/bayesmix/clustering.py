import warnings
from dataclasses import dataclass

import numpy as np
import structlog
from sklearn.cluster import KMeans
from sklearn.exceptions import ConvergenceWarning

from bayesmix.config import settings
from bayesmix.errors import InvalidDataError, InvalidParameterError

log = structlog.get_logger()


@dataclass
class KMeansResult:
    centers: np.ndarray
    labels: np.ndarray
    inertia: float
    n_nonempty: int
    n_iter: int = 0


def kmeans(
    points: np.ndarray,
    k: int,
    rng: np.random.Generator,
    max_iter: int | None = None,
    n_restarts: int | None = None,
) -> KMeansResult:
    """Best-of-restarts Lloyd's algorithm with k-means++ seeding.

    Labels are 0-based. The scikit-learn seed is drawn from ``rng``, so equal generators give
    equal results. Clusters left empty (fewer distinct points than ``k``) are reported through
    ``n_nonempty`` rather than as an error.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.ndim != 2 or points.shape[0] < 1 or points.shape[1] < 1:
        raise InvalidDataError(f"expected a non-empty n x d matrix, got shape {points.shape}")
    if not np.all(np.isfinite(points)):
        raise InvalidDataError("k-means input contains non-finite values")
    if k < 1:
        raise InvalidParameterError("k", "must be at least 1")
    max_iter = max_iter or settings.kmeans_max_iter
    n_restarts = n_restarts or settings.kmeans_restarts
    n = points.shape[0]

    if k >= n:
        # one point per cluster; surplus centers duplicate the first point and stay empty
        centers = np.vstack([points, np.repeat(points[:1], k - n, axis=0)])
        return KMeansResult(
            centers=centers,
            labels=np.arange(n),
            inertia=0.0,
            n_nonempty=n,
        )

    model = KMeans(
        n_clusters=k,
        init="k-means++",
        n_init=n_restarts,
        max_iter=max_iter,
        tol=0,
        algorithm="lloyd",
        random_state=int(rng.integers(2**31 - 1)),
    )
    with warnings.catch_warnings():
        # fewer distinct points than clusters; surfaces as n_nonempty < k
        warnings.simplefilter("ignore", ConvergenceWarning)
        model.fit(points)
    labels = model.labels_.astype(np.int64)
    result = KMeansResult(
        centers=np.asarray(model.cluster_centers_, dtype=float),
        labels=labels,
        inertia=float(model.inertia_),
        n_nonempty=int(np.count_nonzero(np.bincount(labels, minlength=k))),
        n_iter=int(model.n_iter_),
    )
    log.debug("kmeans_fit", k=k, inertia=result.inertia, n_iter=result.n_iter)
    return result
