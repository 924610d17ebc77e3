"""Hit rate: fraction of real records a synthetic record nearly reproduces.

A real row is hit when some synthetic row matches every categorical
exactly and every numerical to within thres_percent of the real column
range (boundary distances count as hits). Constant columns therefore
require exact equality. High hit rates flag wholesale copying.
"""

from __future__ import annotations

import numpy as np

from ..data import ColumnKind
from .base import Category, Direction, MetricDescriptor, MetricOutput


def evaluate(ctx, seed, thres_percent=1.0 / 30.0):
    real, syn = ctx.real, ctx.synthetic
    ok = np.ones((real.n_rows, syn.n_rows), dtype=bool)
    for col_r in real.columns:
        col_s = syn.column(col_r.name)
        if col_r.kind is ColumnKind.NUMERICAL:
            lo, hi = ctx.norm.bounds[col_r.name]
            tol = thres_percent * (hi - lo)
            ok &= (
                np.abs(col_r.values[:, None] - col_s.values[None, :]) <= tol
            )
        else:
            ok &= ctx.norm.codes(col_r)[:, None] == ctx.norm.codes(col_s)[None, :]
    return METRIC.result(
        outputs=[
            MetricOutput(
                name="hit_rate",
                label="Near-match hit rate",
                value=float(ok.any(axis=1).mean()),
                direction=Direction.LOWER_BETTER,
            )
        ]
    )


METRIC = MetricDescriptor(
    key="hit_rate",
    label="Near-match hit rate",
    category=Category.PRIVACY,
    evaluate=evaluate,
    options={"thres_percent": 1.0 / 30.0},
)
