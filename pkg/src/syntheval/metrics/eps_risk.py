"""Identifiability risk under an entropy-weighted distance.

A real record is deemed identifiable when its nearest synthetic record
lies strictly closer (under a distance where rare-information columns
weigh more) than its nearest real neighbor. Column weights are the inverse
Shannon entropies computed on the real table (numericals discretized with
Scott's rule), normalized to sum to the column count; zero-entropy columns
carry no weight. The reported value is the identifiable fraction.
"""

from __future__ import annotations

import numpy as np

from ..data import ColumnKind
from ..distance import distance_matrix
from ..stats import scott_bin_edges
from .base import Category, Direction, MetricDescriptor, MetricOutput, encoded


def _entropy(counts: np.ndarray) -> float:
    total = counts.sum()
    p = counts[counts > 0] / total
    return float(-np.sum(p * np.log(p)))


def column_weights(ctx) -> np.ndarray:
    """Inverse-entropy weights in distance attribute order (numericals first)."""
    raw = {}
    for col in ctx.real.columns:
        if col.kind is ColumnKind.CATEGORICAL:
            codes = ctx.norm.codes(col)
            h = _entropy(np.bincount(codes))
        else:
            edges = scott_bin_edges(col.values)
            counts, _ = np.histogram(col.values, bins=edges)
            h = _entropy(counts)
        raw[col.name] = 0.0 if h == 0.0 else 1.0 / h
    ordered = [raw[n] for n in ctx.real.numerical_names()] + [
        raw[n] for n in ctx.real.categorical_names()
    ]
    w = np.array(ordered, dtype=np.float64)
    total = w.sum()
    if total > 0:
        w *= len(w) / total
    return w


def evaluate(ctx, seed):
    if ctx.real.n_rows < 2:
        return METRIC.disabled("leave-one-out distances need at least two real rows")
    weights = column_weights(ctx)
    enc_r = encoded(ctx, "real")
    enc_s = encoded(ctx, "synthetic")
    d_rs = distance_matrix(enc_r, enc_s, ctx.distance_kind, weights).min(axis=1)
    d_rr = distance_matrix(enc_r, enc_r, ctx.distance_kind, weights)
    np.fill_diagonal(d_rr, np.inf)
    value = float(np.mean(d_rs < d_rr.min(axis=1)))
    return METRIC.result(
        outputs=[
            MetricOutput(
                name="identifiability_risk",
                label="Identifiability risk",
                value=value,
                direction=Direction.LOWER_BETTER,
            )
        ]
    )


METRIC = MetricDescriptor(
    key="eps_risk",
    label="Identifiability risk",
    category=Category.PRIVACY,
    evaluate=evaluate,
)
