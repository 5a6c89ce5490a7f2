from dataclasses import dataclass

import numpy as np

from bayesmix.models.dataset import Dataset
from bayesmix.models.prior import PriorConfig
from bayesmix.models.state import MixtureState


@dataclass
class SweepContext:
    data: Dataset
    prior: PriorConfig
    state: MixtureState
    rng: np.random.Generator
    permutation_step: bool = False
    iteration: int = 0
    # K drawn by the telescoping step, consumed when empty components are added
    next_K: int | None = None
