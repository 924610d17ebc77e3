"""Average empirical Hellinger distance across columns.

Categorical columns compare level frequency vectors; numerical columns are
histogrammed over shared Scott-rule bins spanning the pooled sample so
both tables see identical support.
"""

from __future__ import annotations

import numpy as np

from ..data import ColumnKind
from ..stats import (
    binned_probabilities,
    hellinger_distance,
    level_probabilities,
    scott_bin_edges,
)
from .base import Category, Direction, MetricDescriptor, MetricOutput, sem


def evaluate(ctx, seed):
    dists = []
    for col_r in ctx.real.columns:
        col_s = ctx.synthetic.column(col_r.name)
        if col_r.kind is ColumnKind.CATEGORICAL:
            p, q = level_probabilities(ctx.norm.codes(col_r), ctx.norm.codes(col_s))
        else:
            edges = scott_bin_edges(np.concatenate([col_r.values, col_s.values]))
            p, q = binned_probabilities(col_r.values, col_s.values, edges)
        dists.append(hellinger_distance(p, q))
    return METRIC.result(
        outputs=[
            MetricOutput(
                name="avg_hellinger_distance",
                label="Average empirical Hellinger distance",
                value=float(np.mean(dists)),
                direction=Direction.LOWER_BETTER,
                error=sem(dists),
            )
        ]
    )


METRIC = MetricDescriptor(
    key="h_dist",
    label="Empirical Hellinger distance",
    category=Category.UTILITY,
    evaluate=evaluate,
)
