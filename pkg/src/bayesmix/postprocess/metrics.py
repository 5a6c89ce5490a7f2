from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy.optimize import linear_sum_assignment
from sklearn.metrics import adjusted_rand_score

from bayesmix.errors import PartitionMismatchError
from bayesmix.postprocess.partition import Partition


def _contingency(a: Partition, b: Partition) -> np.ndarray:
    if a.N != b.N:
        raise PartitionMismatchError(a.N, b.N)
    table = np.zeros((a.n_groups, b.n_groups), dtype=np.int64)
    np.add.at(table, (a.labels - 1, b.labels - 1), 1)
    return table


def ari(a: Partition, b: Partition) -> float:
    """Hubert-Arabie adjusted Rand index."""
    if a.N != b.N:
        raise PartitionMismatchError(a.N, b.N)
    return float(adjusted_rand_score(a.labels, b.labels))


@dataclass
class ConfusionTable:
    """Rows are true groups by ascending size, columns the estimated groups matched to them."""

    table: np.ndarray
    row_labels: list[str]
    col_labels: list[str]
    mcr: float

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.table, index=self.row_labels, columns=self.col_labels)


def _group_names(p: Partition) -> list[str]:
    if p.names is not None:
        return list(p.names)
    return [str(g + 1) for g in range(p.n_groups)]


def _size_order(sizes: np.ndarray, n_matched: int) -> np.ndarray:
    """The ``n_matched`` largest groups by ascending size, then the surplus groups."""
    largest = np.sort(np.argsort(-sizes, kind="stable")[:n_matched])
    matched = largest[np.argsort(sizes[largest], kind="stable")]
    rest = np.setdiff1d(np.arange(sizes.size), matched)
    return np.concatenate([matched, rest[np.argsort(sizes[rest], kind="stable")]])


def _tie_blocks(row_sizes: np.ndarray, col_sizes: np.ndarray) -> list[slice]:
    """Runs of matched positions whose row or column sizes repeat their predecessor's."""
    blocks = []
    start = 0
    for pos in range(1, row_sizes.size + 1):
        if (
            pos == row_sizes.size
            or (row_sizes[pos] != row_sizes[pos - 1] and col_sizes[pos] != col_sizes[pos - 1])
        ):
            if pos - start > 1:
                blocks.append(slice(start, pos))
            start = pos
    return blocks


def _match_within_ties(
    table: np.ndarray, row_order: np.ndarray, col_order: np.ndarray, n_matched: int
) -> np.ndarray:
    """Reorder columns inside each size tie so the matched groups overlap the most."""
    col_order = col_order.copy()
    row_sizes = table.sum(axis=1)[row_order[:n_matched]]
    col_sizes = table.sum(axis=0)[col_order[:n_matched]]
    for block in _tie_blocks(row_sizes, col_sizes):
        rows, cols = row_order[block], col_order[block]
        _, best = linear_sum_assignment(table[np.ix_(rows, cols)], maximize=True)
        col_order[block] = cols[best]
    return col_order


def confusion_and_mcr(estimated: Partition, truth: Partition) -> ConfusionTable:
    """Align estimated groups to true groups by size and count the off-diagonal mass.

    The largest groups of either side are sorted by ascending size and matched in that order;
    among groups of equal size the matching with the largest overlap wins. Surplus groups
    trail the table and their members count as errors.
    """
    table = _contingency(truth, estimated)
    n_matched = min(table.shape)
    row_order = _size_order(truth.sizes(), n_matched)
    col_order = _size_order(estimated.sizes(), n_matched)
    col_order = _match_within_ties(table, row_order, col_order, n_matched)
    aligned = table[row_order][:, col_order]
    correct = int(np.trace(aligned[:n_matched, :n_matched]))
    truth_names, est_names = _group_names(truth), _group_names(estimated)
    return ConfusionTable(
        table=aligned,
        row_labels=[truth_names[i] for i in row_order],
        col_labels=[est_names[j] for j in col_order],
        mcr=1.0 - correct / truth.N,
    )
