"""Difference between the real and synthetic mutual information structures.

Columns are discretized once over the pooled data (categoricals keep their
level codes, numericals get Scott-rule bins over real plus synthetic), the
pairwise normalized mutual information matrix is computed per table, and
the value is the Frobenius norm of the difference.
"""

from __future__ import annotations

import numpy as np

from ..data import ColumnKind
from ..stats import frobenius_diff, normalized_mutual_information, scott_bin_edges
from .base import Category, Direction, MetricDescriptor, MetricOutput


def _bin_codes(values, edges) -> np.ndarray:
    idx = np.searchsorted(edges, values, side="right") - 1
    return np.clip(idx, 0, len(edges) - 2)


def discretized_pair(ctx, name):
    """Real and synthetic codes of one column over a shared discretization."""
    col_r = ctx.real.column(name)
    col_s = ctx.synthetic.column(name)
    if col_r.kind is ColumnKind.CATEGORICAL:
        return ctx.norm.codes(col_r), ctx.norm.codes(col_s)
    edges = scott_bin_edges(np.concatenate([col_r.values, col_s.values]))
    return _bin_codes(col_r.values, edges), _bin_codes(col_s.values, edges)


def _nmi_matrix(columns) -> np.ndarray:
    k = len(columns)
    out = np.eye(k)
    for i in range(k):
        for j in range(i):
            out[i, j] = out[j, i] = normalized_mutual_information(columns[i], columns[j])
    return out


def evaluate(ctx, seed):
    if ctx.real.n_cols < 2:
        return METRIC.disabled("needs at least two columns")
    names = ctx.real.names
    codes_r, codes_s = [], []
    for name in names:
        r, s = discretized_pair(ctx, name)
        codes_r.append(r)
        codes_s.append(s)
    m_real = _nmi_matrix(codes_r)
    m_syn = _nmi_matrix(codes_s)
    return METRIC.result(
        outputs=[
            MetricOutput(
                name="mi_matrix_difference",
                label="Mutual information matrix difference",
                value=frobenius_diff(m_real, m_syn),
                direction=Direction.LOWER_BETTER,
            )
        ],
        plots={
            "difference": {
                "kind": "heatmap",
                "columns": names,
                "matrix": (m_real - m_syn).tolist(),
            }
        },
    )


METRIC = MetricDescriptor(
    key="mi_diff",
    label="Mutual information matrix difference",
    category=Category.UTILITY,
    evaluate=evaluate,
)
