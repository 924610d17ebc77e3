"""Record distances over mixed numerical/categorical tables, plus exact k-NN.

Two kernels are offered:

* Gower: the mean over attributes of per-attribute dissimilarities, where a
  numerical attribute contributes |a - b| / range (range taken from the
  normalization spec, i.e. the real table) and a categorical attribute
  contributes 0/1 on mismatch. Constant numerical columns contribute 0.
* Euclidean: the L2 norm over min-max scaled numericals with categoricals
  one-hot expanded, so a single differing categorical contributes sqrt(2).

Both kernels accumulate numerical attributes first (in table order), then
categorical ones; the record-level reference functions follow the same
order so the vectorized and scalar paths agree bit for bit. Out-of-range
values are not clipped, so synthetic outliers keep their distance.

Neighbor search is exact over the full pairwise matrix. Ties are broken by
the lower reference row id; leave-one-out excludes the identical row id,
never an equal-valued duplicate row.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import (
    ColumnKind,
    DistanceKind,
    NormalizationSpec,
    Table,
    build_normalization,
)
from .errors import ValidationError


@dataclass(frozen=True)
class EncodedTable:
    """Distance-ready form of a table: scaled numericals and level codes."""

    num: np.ndarray  # [n, n_num] float64, min-max scaled by the spec
    cat: np.ndarray  # [n, n_cat] int64 level codes
    n_attributes: int

    @property
    def n_rows(self) -> int:
        return self.num.shape[0]


def encode_for_distance(table: Table, spec: NormalizationSpec) -> EncodedTable:
    num_cols = []
    cat_cols = []
    for col in table.columns:
        if col.kind is ColumnKind.NUMERICAL:
            lo, hi = spec.bounds[col.name]
            if hi > lo:
                num_cols.append((col.values - lo) / (hi - lo))
            else:
                num_cols.append(np.zeros_like(col.values))
        else:
            cat_cols.append(spec.codes(col))
    n = table.n_rows
    num = np.column_stack(num_cols) if num_cols else np.empty((n, 0))
    cat = np.column_stack(cat_cols) if cat_cols else np.empty((n, 0), dtype=np.int64)
    return EncodedTable(num=num, cat=cat, n_attributes=table.n_cols)


def _split_weights(weights, n_num: int, n_cat: int):
    if weights is None:
        return None, None
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (n_num + n_cat,):
        raise ValidationError(
            f"weights must have one entry per attribute ({n_num + n_cat}), got {w.shape}"
        )
    if np.any(w < 0):
        raise ValidationError("attribute weights must be non-negative")
    return w[:n_num], w[n_num:]


def gower_matrix(a: EncodedTable, b: EncodedTable, weights=None) -> np.ndarray:
    """Pairwise Gower dissimilarity, [n_a, n_b].

    With ``weights`` (per attribute, numericals first) the plain mean becomes
    a weighted mean; weights summing to the attribute count reproduce the
    unweighted kernel exactly.
    """
    w_num, w_cat = _split_weights(weights, a.num.shape[1], a.cat.shape[1])
    acc = np.zeros((a.num.shape[0], b.num.shape[0]))
    for j in range(a.num.shape[1]):
        d = np.abs(a.num[:, j, None] - b.num[None, :, j])
        acc += d if w_num is None else w_num[j] * d
    for j in range(a.cat.shape[1]):
        d = (a.cat[:, j, None] != b.cat[None, :, j]).astype(np.float64)
        acc += d if w_cat is None else w_cat[j] * d
    denom = a.n_attributes if weights is None else float(np.sum(np.asarray(weights)))
    if denom <= 0:
        return np.zeros_like(acc)
    return acc / denom


def euclidean_matrix(a: EncodedTable, b: EncodedTable, weights=None) -> np.ndarray:
    """Pairwise Euclidean distance over scaled numericals and one-hot levels.

    Differing levels of a one-hot expanded categorical contribute 1 + 1 to
    the squared distance; weights multiply per-attribute squared terms.
    """
    w_num, w_cat = _split_weights(weights, a.num.shape[1], a.cat.shape[1])
    acc = np.zeros((a.num.shape[0], b.num.shape[0]))
    for j in range(a.num.shape[1]):
        d = a.num[:, j, None] - b.num[None, :, j]
        sq = d * d
        acc += sq if w_num is None else w_num[j] * sq
    for j in range(a.cat.shape[1]):
        d = 2.0 * (a.cat[:, j, None] != b.cat[None, :, j])
        acc += d if w_cat is None else w_cat[j] * d
    return np.sqrt(acc)


def distance_matrix(
    a: EncodedTable, b: EncodedTable, kind: DistanceKind, weights=None
) -> np.ndarray:
    if kind is DistanceKind.GOWER:
        return gower_matrix(a, b, weights)
    return euclidean_matrix(a, b, weights)


def _scaled(value: float, lo: float, hi: float) -> float:
    return (value - lo) / (hi - lo) if hi > lo else 0.0


def gower_distance(a_row, b_row, kinds, bounds) -> float:
    """Gower dissimilarity between two raw records.

    ``kinds`` is the per-column ColumnKind sequence and ``bounds`` the
    per-column (lo, hi) tuples (ignored for categoricals). Reference form of
    the kernel; the matrix path must agree with it exactly.
    """
    total = 0.0
    for a, b, kind, bd in zip(a_row, b_row, kinds, bounds):
        if kind is ColumnKind.NUMERICAL:
            lo, hi = bd
            total += abs(_scaled(a, lo, hi) - _scaled(b, lo, hi))
    for a, b, kind in zip(a_row, b_row, kinds):
        if kind is ColumnKind.CATEGORICAL:
            total += 0.0 if a == b else 1.0
    return total / len(kinds)


def euclidean_distance(a_row, b_row, kinds, bounds) -> float:
    """Euclidean counterpart of gower_distance (one-hot categoricals)."""
    total = 0.0
    for a, b, kind, bd in zip(a_row, b_row, kinds, bounds):
        if kind is ColumnKind.NUMERICAL:
            lo, hi = bd
            d = _scaled(a, lo, hi) - _scaled(b, lo, hi)
            total += d * d
    for a, b, kind in zip(a_row, b_row, kinds):
        if kind is ColumnKind.CATEGORICAL:
            total += 0.0 if a == b else 2.0
    return float(np.sqrt(total))


@dataclass(frozen=True)
class NeighborResult:
    """k nearest reference rows per query row, nearest first."""

    distances: np.ndarray  # [n_query, k]
    indices: np.ndarray  # [n_query, k] reference row ids


@dataclass(frozen=True)
class DistanceIndex:
    """A reference table frozen into distance-ready form for repeated queries."""

    reference: Table
    norm: NormalizationSpec
    kind: DistanceKind
    encoded: EncodedTable
    weights: np.ndarray | None = None

    def matrix(self, query: Table) -> np.ndarray:
        enc_q = encode_for_distance(query, self.norm)
        return distance_matrix(enc_q, self.encoded, self.kind, self.weights)

    def query(self, query: Table, k: int, leave_one_out: bool = False) -> NeighborResult:
        n_ref = self.reference.n_rows
        if k < 1:
            raise ValidationError(f"k must be >= 1, got {k}")
        if leave_one_out:
            if query is not self.reference and query != self.reference:
                raise ValidationError("leave_one_out requires query == reference")
            if n_ref < k + 1:
                raise ValidationError(
                    f"leave_one_out with k={k} needs at least {k + 1} rows, have {n_ref}"
                )
        elif k > n_ref:
            raise ValidationError(f"k={k} exceeds reference size {n_ref}")
        dist = self.matrix(query)
        if leave_one_out:
            np.fill_diagonal(dist, np.inf)
        # stable argsort keeps the lower row id first among exact ties
        order = np.argsort(dist, axis=1, kind="stable")[:, :k]
        return NeighborResult(
            distances=np.take_along_axis(dist, order, axis=1), indices=order
        )


def build_index(
    reference: Table,
    kind: DistanceKind = DistanceKind.GOWER,
    norm: NormalizationSpec | None = None,
    weights=None,
) -> DistanceIndex:
    if norm is None:
        norm = build_normalization(reference)
    encoded = encode_for_distance(reference, norm)
    w = None if weights is None else np.asarray(weights, dtype=np.float64)
    return DistanceIndex(reference=reference, norm=norm, kind=kind, encoded=encoded, weights=w)


def nn_distances(
    query: Table,
    reference: Table,
    k: int = 1,
    leave_one_out: bool = False,
    kind: DistanceKind = DistanceKind.GOWER,
    norm: NormalizationSpec | None = None,
    weights=None,
) -> NeighborResult:
    """Exact k nearest neighbors of each query row among the reference rows.

    When no normalization spec is given one is built from the reference
    table (plus the query table for categorical level coverage). Ties break
    toward the lower reference row id; with ``leave_one_out`` the query row
    itself is excluded by id, so duplicates of it still count.
    """
    if norm is None:
        norm = build_normalization(reference, query)
    index = build_index(reference, kind=kind, norm=norm, weights=weights)
    return index.query(query, k=k, leave_one_out=leave_one_out)
