from dataclasses import dataclass, field

import numpy as np

from bayesmix.errors import InvalidDataError


@dataclass(frozen=True, eq=False)
class Dataset:
    y: np.ndarray
    feature_names: tuple[str, ...] = ()
    true_labels: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        y = np.array(self.y, dtype=float)
        if y.ndim == 1:
            y = y[:, None]
        if y.ndim != 2 or y.shape[0] < 1 or y.shape[1] < 1:
            raise InvalidDataError(f"expected an N x r matrix, got shape {y.shape}")
        if not np.all(np.isfinite(y)):
            bad_row = int(np.flatnonzero(~np.all(np.isfinite(y), axis=1))[0])
            raise InvalidDataError(f"non-finite value in row {bad_row + 1}")
        names = tuple(self.feature_names) or tuple(f"y{j + 1}" for j in range(y.shape[1]))
        if len(names) != y.shape[1]:
            raise InvalidDataError(f"{len(names)} feature names for {y.shape[1]} columns")
        if self.true_labels is not None:
            labels = np.asarray(self.true_labels)
            if labels.shape != (y.shape[0],):
                raise InvalidDataError(
                    f"true_labels has length {labels.shape[0]}, expected {y.shape[0]}"
                )
            object.__setattr__(self, "true_labels", labels)
        y.setflags(write=False)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "feature_names", names)

    @property
    def N(self) -> int:
        return self.y.shape[0]

    @property
    def r(self) -> int:
        return self.y.shape[1]
