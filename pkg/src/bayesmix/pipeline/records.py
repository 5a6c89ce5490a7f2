from dataclasses import dataclass, field

import numpy as np

from bayesmix.models.prior import PriorConfig
from bayesmix.models.state import MixtureState
from bayesmix.schemas.chain import ChainConfig, SamplerMode


@dataclass
class SweepRecord:
    iter: int
    K: int
    K_plus: int
    eta: np.ndarray
    mu: np.ndarray
    Sigma: np.ndarray
    N_k: np.ndarray
    S: np.ndarray | None
    log_lik: float

    @classmethod
    def from_state(
        cls, iteration: int, state: MixtureState, log_lik: float, store_assignments: bool
    ) -> "SweepRecord":
        return cls(
            iter=iteration,
            K=state.K,
            K_plus=state.K_plus,
            eta=state.eta.copy(),
            mu=state.mu.copy(),
            Sigma=state.Sigma.copy(),
            N_k=state.counts.copy(),
            S=state.S.copy() if store_assignments else None,
            log_lik=log_lik,
        )


@dataclass
class ChainOutput:
    records: list[SweepRecord]
    config: ChainConfig
    mode: SamplerMode
    prior: PriorConfig | None = None
    wall_time: float = 0.0
    seed: int = 0
    step_seconds: dict[str, float] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def has_assignments(self) -> bool:
        return bool(self.records) and all(rec.S is not None for rec in self.records)

    @property
    def r(self) -> int:
        return self.records[0].mu.shape[1]

    @property
    def N(self) -> int:
        return int(self.records[0].N_k.sum())
