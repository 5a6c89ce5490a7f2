from dataclasses import dataclass

import numpy as np

from bayesmix.errors import PreconditionError


@dataclass
class MixtureState:
    """One MCMC state. Component indices and assignments ``S`` are 0-based."""

    eta: np.ndarray
    mu: np.ndarray
    Sigma: np.ndarray
    C0: np.ndarray
    S: np.ndarray
    counts: np.ndarray

    @classmethod
    def from_assignments(
        cls,
        eta: np.ndarray,
        mu: np.ndarray,
        Sigma: np.ndarray,
        C0: np.ndarray,
        S: np.ndarray,
    ) -> "MixtureState":
        S = np.asarray(S, dtype=np.int64)
        counts = np.bincount(S, minlength=len(eta))
        return cls(
            eta=np.asarray(eta, dtype=float),
            mu=np.asarray(mu, dtype=float),
            Sigma=np.asarray(Sigma, dtype=float),
            C0=np.asarray(C0, dtype=float),
            S=S,
            counts=counts,
        )

    @property
    def K(self) -> int:
        return self.eta.shape[0]

    @property
    def K_plus(self) -> int:
        return int(np.count_nonzero(self.counts))

    @property
    def N(self) -> int:
        return self.S.shape[0]

    def refresh_counts(self) -> None:
        self.counts = np.bincount(self.S, minlength=self.K)

    def copy(self) -> "MixtureState":
        return MixtureState(
            eta=self.eta.copy(),
            mu=self.mu.copy(),
            Sigma=self.Sigma.copy(),
            C0=self.C0.copy(),
            S=self.S.copy(),
            counts=self.counts.copy(),
        )

    def validate(self) -> None:
        K = self.K
        if self.mu.shape[0] != K or self.Sigma.shape[0] != K or self.counts.shape[0] != K:
            raise PreconditionError("component arrays disagree on K")
        if abs(float(self.eta.sum()) - 1.0) > 1e-10:
            raise PreconditionError(f"weights sum to {self.eta.sum()}, expected 1")
        if self.S.size and (self.S.min() < 0 or self.S.max() >= K):
            raise PreconditionError("assignment outside 1..K")
        if int(self.counts.sum()) != self.N:
            raise PreconditionError("component counts do not sum to N")
