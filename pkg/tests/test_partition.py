import math

import numpy as np
import pytest

from bayesmix.errors import PartitionMismatchError, PreconditionError
from bayesmix.postprocess.partition import (
    Partition,
    coallocation_matrix,
    expected_vi,
    map_partition,
    variation_of_information,
    vi_partition,
)


def test_partition_from_labels_sorted_names():
    p = Partition.from_labels(["Normal", "Overt", "Normal", "Chemical"])
    assert p.labels.tolist() == [2, 3, 2, 1]
    assert p.names == ("Chemical", "Normal", "Overt")
    assert p.sizes().tolist() == [1, 2, 1]
    assert p.N == 4


# --- MAP partition ---


def test_map_partition_modal_label():
    assignments = np.array([[0, 0, 1], [0, 0, 1], [1, 0, 1]])
    p = map_partition(assignments)
    assert p.labels.tolist() == [1, 1, 2]
    assert p.n_groups == 2


def test_map_partition_ties_go_to_smallest_label():
    p = map_partition(np.array([[0, 2], [1, 2], [1, 0], [0, 0]]))
    # first observation: 0 and 1 twice each; second: 0 and 2 twice each
    assert p.labels.tolist() == [1, 1]
    assert p.n_groups == 1


def test_map_partition_labels_are_contiguous():
    p = map_partition(np.array([[4, 4, 2, 7]]))
    assert p.labels.tolist() == [2, 2, 1, 3]
    assert set(p.labels) == set(range(1, p.n_groups + 1))


def test_map_partition_invariant_to_sweep_order(rng):
    assignments = rng.integers(0, 3, size=(50, 12))
    shuffled = assignments[rng.permutation(50)]
    np.testing.assert_array_equal(
        map_partition(assignments).labels, map_partition(shuffled).labels
    )


def test_map_partition_rejects_empty():
    with pytest.raises(PreconditionError):
        map_partition(np.empty((0, 3), dtype=int))


# --- Co-allocation ---


def test_coallocation_small_case():
    mat = coallocation_matrix(np.array([[0, 0, 1], [0, 1, 1]]))
    expected = np.array([[1.0, 0.5, 0.0], [0.5, 1.0, 0.5], [0.0, 0.5, 1.0]])
    np.testing.assert_allclose(mat, expected)


def test_coallocation_symmetric_unit_diagonal(rng):
    mat = coallocation_matrix(rng.integers(0, 4, size=(37, 15)), chunk=10)
    np.testing.assert_array_equal(mat, mat.T)
    np.testing.assert_array_equal(np.diag(mat), np.ones(15))
    assert mat.min() >= 0 and mat.max() <= 1


def test_coallocation_invariant_to_label_permutation(rng):
    assignments = rng.integers(0, 3, size=(20, 10))
    relabeled = np.stack([rng.permutation(3)[row] for row in assignments])
    np.testing.assert_allclose(coallocation_matrix(assignments), coallocation_matrix(relabeled))


# --- Variation of information ---


def test_vi_known_values():
    assert variation_of_information(np.array([0, 0, 1, 1]), np.array([0, 1, 0, 1])) == (
        pytest.approx(2 * math.log(2))
    )
    assert variation_of_information(np.zeros(4, dtype=int), np.arange(4)) == pytest.approx(
        math.log(4)
    )


def test_vi_identity_and_symmetry(rng):
    for _ in range(10):
        a = rng.integers(0, 4, size=30)
        b = rng.integers(0, 3, size=30)
        assert variation_of_information(a, a) == 0.0
        assert variation_of_information(a, b) == pytest.approx(variation_of_information(b, a))


def test_vi_label_invariant():
    a = Partition(labels=np.array([1, 1, 2, 3]), n_groups=3)
    b = Partition(labels=np.array([3, 3, 1, 2]), n_groups=3)
    assert variation_of_information(a, b) == 0.0


def test_vi_length_mismatch():
    with pytest.raises(PartitionMismatchError):
        variation_of_information(np.array([0, 1]), np.array([0, 1, 1]))


# --- VI partition ---


def test_vi_partition_all_identical():
    assignments = np.tile([2, 2, 0, 1], (5, 1))
    candidates, weights, losses = expected_vi(assignments)
    assert candidates.shape[0] == 1
    assert weights.tolist() == [1.0]
    assert losses[0] == pytest.approx(0.0, abs=1e-12)
    assert vi_partition(assignments).labels.tolist() == [1, 1, 2, 3]


def test_vi_partition_majority_under_label_switching():
    assignments = np.array(
        [[0, 0, 1, 1], [1, 1, 0, 0], [2, 2, 0, 0], [0, 0, 0, 1]]
    )
    candidates, weights, _ = expected_vi(assignments)
    assert candidates.shape[0] == 2
    np.testing.assert_allclose(sorted(weights), [0.25, 0.75])
    assert vi_partition(assignments).labels.tolist() == [1, 1, 2, 2]


def test_expected_vi_matches_pairwise_loop(rng):
    assignments = rng.integers(0, 3, size=(25, 8))
    candidates, weights, losses = expected_vi(assignments)
    for u, cand in enumerate(candidates):
        brute = np.mean([variation_of_information(cand, row) for row in assignments])
        assert losses[u] == pytest.approx(brute, abs=1e-12)
    assert weights.sum() == pytest.approx(1.0)


def test_expected_vi_thins_long_chains(rng):
    assignments = rng.integers(0, 2, size=(500, 6))
    candidates, weights, _ = expected_vi(assignments, max_partitions=50)
    assert weights.sum() == pytest.approx(1.0)
    assert candidates.shape[0] <= 50


def test_vi_partition_needs_two_sweeps():
    with pytest.raises(PreconditionError):
        vi_partition(np.array([[0, 1, 1]]))
