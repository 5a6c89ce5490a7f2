from dataclasses import dataclass

import numpy as np

from bayesmix.errors import EmptySelectionError, PreconditionError
from bayesmix.pipeline.records import ChainOutput


@dataclass
class FilteredDraws:
    """Sweeps with exactly ``K_plus`` filled components, restricted to those components.

    Component order within a sweep follows the original component index. Weights are kept as
    drawn, i.e. not renormalized over the filled components.
    """

    K_plus: int
    sweep_indices: np.ndarray
    iters: np.ndarray
    eta: np.ndarray
    mu: np.ndarray
    Sigma: np.ndarray
    N_k: np.ndarray
    S: np.ndarray | None
    n_eligible: int

    @property
    def M(self) -> int:
        return self.sweep_indices.shape[0]


def kplus_distribution(chain: ChainOutput) -> dict[int, float]:
    if not chain.records:
        raise PreconditionError("chain has no stored sweeps")
    values, counts = np.unique([rec.K_plus for rec in chain.records], return_counts=True)
    freqs = counts / counts.sum()
    return {int(v): float(f) for v, f in zip(values, freqs, strict=True)}


def kplus_mode(distribution: dict[int, float]) -> int:
    if not distribution:
        raise PreconditionError("empty K_plus distribution")
    best = max(distribution.values())
    return min(k for k, f in distribution.items() if f == best)


def filter_to_kplus(chain: ChainOutput, k_plus: int) -> FilteredDraws:
    selected = [i for i, rec in enumerate(chain.records) if rec.K_plus == k_plus]
    if not selected:
        raise EmptySelectionError(k_plus)
    with_assignments = chain.has_assignments
    eta, mu, Sigma, N_k, S = [], [], [], [], []
    for i in selected:
        rec = chain.records[i]
        filled = np.flatnonzero(rec.N_k > 0)
        eta.append(rec.eta[filled])
        mu.append(rec.mu[filled])
        Sigma.append(rec.Sigma[filled])
        N_k.append(rec.N_k[filled])
        if with_assignments:
            assert rec.S is not None
            relabel = np.full(rec.K, -1, dtype=np.int64)
            relabel[filled] = np.arange(k_plus)
            S.append(relabel[rec.S])
    return FilteredDraws(
        K_plus=k_plus,
        sweep_indices=np.asarray(selected),
        iters=np.array([chain.records[i].iter for i in selected]),
        eta=np.stack(eta),
        mu=np.stack(mu),
        Sigma=np.stack(Sigma),
        N_k=np.stack(N_k),
        S=np.stack(S) if with_assignments else None,
        n_eligible=len(chain.records),
    )
