"""Attribute disclosure risk: predicting each column from all the others.

An adversary holding the synthetic table trains one random forest per
column (classifier for categoricals; regressor on the min-max scaled
target for numericals) and attacks the real records. Numerical attacks
count a hit when the prediction lands within thres_percent of the real
column range, boundary included; a hit is a correct disclosure, so the
numerical column's precision, recall and F1 all equal its hit rate. The
reported numbers are macro averages pooled over all columns.
"""

from __future__ import annotations

import numpy as np

from ..data import ColumnKind, encode_features
from ..models import ModelSpec, fit, scores
from .base import (
    Category,
    Direction,
    MetricDescriptor,
    MetricOutput,
    derive_seed,
    sem,
)


def _scaled_target(ctx, table, name):
    lo, hi = ctx.norm.bounds[name]
    v = table.column(name).values
    return (v - lo) / (hi - lo) if hi > lo else np.zeros_like(v)


def evaluate(ctx, seed, thres_percent=1.0 / 30.0):
    if ctx.real.n_cols < 2:
        return METRIC.disabled("needs at least two columns")
    f1s, precisions, recalls = [], [], []
    for col in ctx.real.columns:
        X_syn = encode_features(ctx.synthetic.drop(col.name), ctx.norm)
        X_real = encode_features(ctx.real.drop(col.name), ctx.norm)
        col_seed = derive_seed(seed, col.name)
        if col.kind is ColumnKind.CATEGORICAL:
            model = fit(
                ModelSpec("random_forest", seed=col_seed),
                X_syn,
                ctx.norm.codes(ctx.synthetic.column(col.name)),
            )
            pred = model.predict(X_real)
            sc = scores(ctx.norm.codes(col), pred)
            f1s.append(sc["f1_macro"])
            precisions.append(sc["precision_macro"])
            recalls.append(sc["recall_macro"])
        else:
            model = fit(
                ModelSpec("random_forest_regressor", seed=col_seed),
                X_syn,
                _scaled_target(ctx, ctx.synthetic, col.name),
            )
            pred = model.predict(X_real)
            hit = float(
                np.mean(np.abs(pred - _scaled_target(ctx, ctx.real, col.name)) <= thres_percent)
            )
            f1s.append(hit)
            precisions.append(hit)
            recalls.append(hit)
    return METRIC.result(
        outputs=[
            MetricOutput(
                name="macro_f1",
                label="Attribute disclosure macro F1",
                value=float(np.mean(f1s)),
                direction=Direction.LOWER_BETTER,
                error=sem(f1s),
            ),
            MetricOutput(
                name="avg_precision",
                label="Attribute disclosure precision",
                value=float(np.mean(precisions)),
                direction=Direction.LOWER_BETTER,
                error=sem(precisions),
            ),
            MetricOutput(
                name="avg_recall",
                label="Attribute disclosure recall",
                value=float(np.mean(recalls)),
                direction=Direction.LOWER_BETTER,
                error=sem(recalls),
            ),
        ]
    )


METRIC = MetricDescriptor(
    key="att_discl",
    label="Attribute disclosure risk",
    category=Category.PRIVACY,
    evaluate=evaluate,
    options={"thres_percent": 1.0 / 30.0},
)
