"""Difference between the real and synthetic correlation structures.

By default both tables get the mixed-kind association matrix (Pearson,
Cramer's V, correlation ratio depending on the column pair); with
``mixed_corr`` off only numerical columns and plain Pearson enter. The
value is the Frobenius norm of the matrix difference.
"""

from __future__ import annotations

import numpy as np

from ..stats import frobenius_diff, mixed_correlation_matrix, pearson_corr
from .base import Category, Direction, MetricDescriptor, MetricOutput


def _pearson_matrix(table) -> np.ndarray:
    names = table.numerical_names()
    cols = [table.column(n).values for n in names]
    k = len(cols)
    out = np.eye(k)
    for i in range(k):
        for j in range(i):
            out[i, j] = out[j, i] = pearson_corr(cols[i], cols[j])
    return out


def evaluate(ctx, seed, mixed_corr=True):
    if mixed_corr:
        if ctx.real.n_cols < 2:
            return METRIC.disabled("needs at least two columns")
        names = ctx.real.names
        m_real = mixed_correlation_matrix(ctx.real, ctx.norm)
        m_syn = mixed_correlation_matrix(ctx.synthetic, ctx.norm)
    else:
        names = ctx.real.numerical_names()
        if len(names) < 2:
            return METRIC.disabled("needs at least two numerical columns")
        m_real = _pearson_matrix(ctx.real.select(names))
        m_syn = _pearson_matrix(ctx.synthetic.select(names))
    return METRIC.result(
        outputs=[
            MetricOutput(
                name="corr_matrix_difference",
                label="Correlation matrix difference",
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
    key="corr_diff",
    label="Correlation matrix difference",
    category=Category.UTILITY,
    evaluate=evaluate,
    options={"mixed_corr": True},
)
