from dataclasses import dataclass

import numpy as np
import structlog
from scipy.special import xlogy

from bayesmix.config import settings
from bayesmix.errors import PartitionMismatchError, PreconditionError

log = structlog.get_logger()


@dataclass(frozen=True, eq=False)
class Partition:
    """Labels 1..n_groups, every label used. ``names[g - 1]`` names group g when known."""

    labels: np.ndarray
    n_groups: int
    names: tuple[str, ...] | None = None

    @classmethod
    def from_labels(cls, values: np.ndarray | list) -> "Partition":
        """Groups numbered in sorted order of the given labels."""
        uniq, codes = np.unique(np.asarray(values), return_inverse=True)
        return cls(labels=codes + 1, n_groups=uniq.size, names=tuple(str(u) for u in uniq))

    @property
    def N(self) -> int:
        return self.labels.shape[0]

    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels - 1, minlength=self.n_groups)


def _codes(p: Partition | np.ndarray) -> np.ndarray:
    labels = p.labels if isinstance(p, Partition) else np.asarray(p)
    return np.unique(labels, return_inverse=True)[1]


def _check_assignments(assignments: np.ndarray) -> np.ndarray:
    assignments = np.asarray(assignments, dtype=np.int64)
    if assignments.ndim != 2 or assignments.shape[0] == 0:
        raise PreconditionError("expected a non-empty (sweeps x N) assignment matrix")
    if assignments.min() < 0:
        raise PreconditionError("assignments must be nonnegative")
    return assignments


def map_partition(assignments: np.ndarray) -> Partition:
    """Per observation the most frequent label over sweeps; ties go to the smallest label."""
    assignments = _check_assignments(assignments)
    K = int(assignments.max()) + 1
    counts = np.stack([(assignments == k).sum(axis=0) for k in range(K)], axis=1)
    modal = counts.argmax(axis=1)
    uniq, codes = np.unique(modal, return_inverse=True)
    return Partition(labels=codes + 1, n_groups=uniq.size)


def coallocation_matrix(assignments: np.ndarray, chunk: int = 1000) -> np.ndarray:
    assignments = _check_assignments(assignments)
    M, N = assignments.shape
    K = int(assignments.max()) + 1
    out = np.zeros((N, N))
    eye = np.eye(K)
    for start in range(0, M, chunk):
        onehot = eye[assignments[start : start + chunk]]
        out += np.einsum("mik,mjk->ij", onehot, onehot)
    return out / M


def _entropy(counts: np.ndarray, n: int, axis: int = -1) -> np.ndarray:
    p = counts / n
    return -xlogy(p, p).sum(axis=axis)


def variation_of_information(a: Partition | np.ndarray, b: Partition | np.ndarray) -> float:
    """VI(a, b) = H(a | b) + H(b | a) in nats; exactly zero for equal partitions."""
    ca, cb = _codes(a), _codes(b)
    if ca.shape != cb.shape:
        raise PartitionMismatchError(ca.shape[0], cb.shape[0])
    n = ca.shape[0]
    na, nb = int(ca.max()) + 1, int(cb.max()) + 1
    joint = np.bincount(ca * nb + cb, minlength=na * nb).reshape(na, nb)
    rows, cols = np.nonzero(joint)
    n_ij = joint[rows, cols].astype(float)
    n_i = joint.sum(axis=1)[rows]
    n_j = joint.sum(axis=0)[cols]
    vi = -np.sum(n_ij / n * (np.log(n_ij / n_i) + np.log(n_ij / n_j)))
    return max(float(vi), 0.0)


def _canonical(assignments: np.ndarray) -> np.ndarray:
    """Relabel every row by order of first appearance so equal partitions get equal rows."""
    out = np.empty_like(assignments)
    for m, row in enumerate(assignments):
        _, first, inverse = np.unique(row, return_index=True, return_inverse=True)
        out[m] = np.argsort(np.argsort(first))[inverse]
    return out


def expected_vi(
    assignments: np.ndarray, max_partitions: int | None = None
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Distinct sampled partitions, their frequencies and their posterior expected VI loss."""
    assignments = _check_assignments(assignments)
    max_partitions = max_partitions or settings.vi_max_partitions
    M, N = assignments.shape
    if M > max_partitions:
        keep = np.unique(np.linspace(0, M - 1, max_partitions).round().astype(np.int64))
        assignments = assignments[keep]
    candidates, weights = np.unique(_canonical(assignments), axis=0, return_counts=True)
    weights = weights / weights.sum()
    n_labels = int(candidates.max()) + 1
    marginal_h = np.array([_entropy(np.bincount(c), N) for c in candidates])
    offsets = (np.arange(candidates.shape[0]) * n_labels * n_labels)[:, None]
    losses = np.empty(candidates.shape[0])
    for u, cand in enumerate(candidates):
        codes = offsets + cand[None, :] * n_labels + candidates
        joint = np.bincount(codes.ravel(), minlength=candidates.shape[0] * n_labels**2)
        joint_h = _entropy(joint.reshape(candidates.shape[0], -1), N)
        vi = np.maximum(2 * joint_h - marginal_h[u] - marginal_h, 0.0)
        losses[u] = float(weights @ vi)
    return candidates, weights, losses


def vi_partition(assignments: np.ndarray, max_partitions: int | None = None) -> Partition:
    """Sampled partition with the smallest posterior expected variation of information.

    The search is restricted to the sampled partitions; ties go to the first candidate in
    lexicographic order of the canonical labels.
    """
    if np.asarray(assignments).shape[0] < 2:
        raise PreconditionError("the VI partition needs at least two sweeps")
    candidates, _, losses = expected_vi(assignments, max_partitions)
    best = int(np.argmin(losses))
    log.info(
        "vi_partition_selected",
        candidates=int(candidates.shape[0]),
        expected_vi=float(losses[best]),
    )
    labels = candidates[best]
    return Partition(labels=labels + 1, n_groups=int(labels.max()) + 1)
