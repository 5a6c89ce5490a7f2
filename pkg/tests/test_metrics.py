import numpy as np
import pytest

from bayesmix.errors import PartitionMismatchError
from bayesmix.postprocess.metrics import ari, confusion_and_mcr
from bayesmix.postprocess.partition import Partition

# true classes against an estimated three-group partition, 145 observations
DIABETES_TABLE = {
    "Overt": (27, 6, 0),
    "Chemical": (1, 24, 11),
    "Normal": (0, 3, 73),
}


def _partition(labels) -> Partition:
    return Partition.from_labels(np.asarray(labels))


@pytest.fixture
def diabetes_pair() -> tuple[Partition, Partition]:
    truth, estimated = [], []
    for name, row in DIABETES_TABLE.items():
        for group, count in enumerate(row, start=1):
            truth += [name] * count
            estimated += [group] * count
    return _partition(estimated), _partition(truth)


# --- ARI ---


def test_ari_known_value():
    assert ari(_partition([0, 0, 1, 1]), _partition([0, 0, 1, 2])) == pytest.approx(
        0.5714285714285714
    )


def test_ari_label_invariance():
    assert ari(_partition([1, 1, 2, 2]), _partition([2, 2, 1, 1])) == 1.0


def test_ari_can_be_negative():
    assert ari(_partition([0, 0, 1, 1]), _partition([0, 1, 0, 1])) == pytest.approx(-0.5)


def test_ari_trivial_partitions():
    assert ari(_partition([1, 1, 1]), _partition([5, 5, 5])) == 1.0
    assert ari(_partition([1, 2, 3]), _partition([3, 1, 2])) == 1.0


def test_ari_symmetric(rng):
    for _ in range(10):
        a = _partition(rng.integers(0, 4, size=40))
        b = _partition(rng.integers(0, 3, size=40))
        assert ari(a, b) == pytest.approx(ari(b, a))


def test_ari_length_mismatch():
    with pytest.raises(PartitionMismatchError):
        ari(_partition([1, 2]), _partition([1, 2, 2]))


def test_ari_diabetes_table(diabetes_pair):
    estimated, truth = diabetes_pair
    assert ari(estimated, truth) == pytest.approx(0.6531, abs=5e-4)


# --- Confusion table and MCR ---


def test_confusion_diabetes_table(diabetes_pair):
    estimated, truth = diabetes_pair
    result = confusion_and_mcr(estimated, truth)
    assert result.row_labels == ["Overt", "Chemical", "Normal"]
    np.testing.assert_array_equal(
        result.table, np.array([[27, 6, 0], [1, 24, 11], [0, 3, 73]])
    )
    assert result.mcr == pytest.approx(21 / 145)
    assert round(result.mcr, 2) == 0.14


def test_confusion_identical_partitions():
    p = _partition([1, 1, 1, 2, 2, 3])
    result = confusion_and_mcr(p, p)
    assert result.mcr == 0.0
    assert np.count_nonzero(result.table - np.diag(np.diag(result.table))) == 0


def test_confusion_absorbs_relabeling():
    truth = _partition(["a", "a", "a", "b", "b"])
    estimated = _partition([2, 2, 2, 1, 1])
    result = confusion_and_mcr(estimated, truth)
    assert result.mcr == 0.0
    assert result.row_labels == ["b", "a"]
    assert result.col_labels == ["1", "2"]


def test_confusion_extra_estimated_group_counts_as_error():
    truth = _partition([1, 1, 1, 1, 2, 2, 2, 2])
    estimated = _partition([1, 1, 1, 3, 2, 2, 2, 2])
    result = confusion_and_mcr(estimated, truth)
    assert result.table.shape == (2, 3)
    assert result.mcr == pytest.approx(1 / 8)


def test_confusion_frame():
    truth = _partition(["x", "y", "y"])
    frame = confusion_and_mcr(_partition([1, 2, 2]), truth).to_frame()
    assert list(frame.index) == ["x", "y"]
    assert frame.to_numpy().sum() == 3


def test_confusion_equal_sized_groups_matched_by_overlap():
    truth = _partition(np.repeat(["a", "b", "c"], 20))
    estimated = _partition(np.repeat([3, 1, 2], 20))
    result = confusion_and_mcr(estimated, truth)
    assert result.mcr == 0.0
    np.testing.assert_array_equal(result.table, 20 * np.eye(3, dtype=int))
    assert result.col_labels == ["3", "1", "2"]


def test_confusion_tie_block_next_to_distinct_sizes():
    truth = _partition(np.repeat(["a", "b", "c"], [10, 10, 30]))
    estimated = _partition(np.repeat([3, 2, 1], [10, 10, 30]))
    result = confusion_and_mcr(estimated, truth)
    assert result.mcr == 0.0
    assert result.row_labels == ["a", "b", "c"]
    assert result.col_labels == ["3", "2", "1"]
