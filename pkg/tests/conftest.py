from pathlib import Path

import numpy as np
import pytest

from bayesmix.models.dataset import Dataset
from bayesmix.services.data_loader import write_dataset

DIABETES_PATH = Path(__file__).resolve().parents[1] / "data" / "diabetes.csv"

requires_diabetes = pytest.mark.skipif(
    not DIABETES_PATH.exists(), reason="data/diabetes.csv is not present"
)


def make_blobs(
    rng: np.random.Generator,
    centers: list[list[float]],
    size: int = 20,
    scale: float = 0.5,
) -> Dataset:
    centers_arr = np.asarray(centers, dtype=float)
    y = np.concatenate(
        [c + scale * rng.standard_normal((size, centers_arr.shape[1])) for c in centers_arr]
    )
    labels = np.repeat(np.arange(1, len(centers) + 1), size)
    return Dataset(y=y, feature_names=("x1", "x2"), true_labels=labels)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240601)


@pytest.fixture
def blobs() -> Dataset:
    return make_blobs(np.random.default_rng(7), [[0.0, 0.0], [6.0, 0.0], [0.0, 6.0]])


@pytest.fixture
def blobs_csv(tmp_path: Path, blobs: Dataset) -> Path:
    return write_dataset(blobs, tmp_path / "blobs.csv")
