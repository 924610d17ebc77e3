"""Dimension-wise means: do the synthetic marginals sit where the real ones do?

Per numerical column the absolute difference of the min-max scaled means;
the metric value is the average over columns. The plot payload carries a
per-attribute difference interval when there are few attributes and a
mean-against-mean scatter otherwise.
"""

from __future__ import annotations

import numpy as np

from ..data import ColumnKind
from ..stats import mean_ci
from .base import Category, Direction, MetricDescriptor, MetricOutput, sem

_SCATTER_AT = 10  # switch plot style once per-attribute intervals get crowded


def _scaled_column(ctx, table, name):
    lo, hi = ctx.norm.bounds[name]
    v = table.column(name).values
    return (v - lo) / (hi - lo) if hi > lo else np.zeros_like(v)


def evaluate(ctx, seed):
    num_names = ctx.real.numerical_names()
    if not num_names:
        return METRIC.disabled("no numerical columns")
    diffs = []
    rows = []
    for name in num_names:
        r = _scaled_column(ctx, ctx.real, name)
        s = _scaled_column(ctx, ctx.synthetic, name)
        diffs.append(abs(float(r.mean()) - float(s.mean())))
        rows.append((name, r, s))
    payload = _payload(rows)
    value = float(np.mean(diffs))
    return METRIC.result(
        outputs=[
            MetricOutput(
                name="avg_means_difference",
                label="Average dimension-wise means difference",
                value=value,
                direction=Direction.LOWER_BETTER,
                error=sem(diffs),
            )
        ],
        plots=payload,
    )


def _payload(rows):
    if len(rows) < _SCATTER_AT:
        columns, diff, lo, hi = [], [], [], []
        for name, r, s in rows:
            d = float(r.mean()) - float(s.mean())
            # normal CI of the mean difference from the two per-table SEMs
            se = np.sqrt(r.var(ddof=1) / r.size + s.var(ddof=1) / s.size)
            columns.append(name)
            diff.append(d)
            lo.append(d - 1.959964 * float(se))
            hi.append(d + 1.959964 * float(se))
        return {
            "means": {
                "kind": "interval_diff",
                "columns": columns,
                "diff": diff,
                "lo": lo,
                "hi": hi,
            }
        }
    columns = [name for name, _, _ in rows]
    payload = {
        "kind": "mean_scatter",
        "columns": columns,
        "real_mean": [float(r.mean()) for _, r, _ in rows],
        "synthetic_mean": [float(s.mean()) for _, _, s in rows],
        "real_ci": [list(mean_ci(r)) if r.size > 1 else None for _, r, _ in rows],
        "synthetic_ci": [list(mean_ci(s)) if s.size > 1 else None for _, _, s in rows],
    }
    return {"means": payload}


METRIC = MetricDescriptor(
    key="dwm",
    label="Dimension-wise means",
    category=Category.UTILITY,
    evaluate=evaluate,
)
