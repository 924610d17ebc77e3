"""Propensity mean squared error: can a classifier tell the sources apart?

Real and synthetic rows are pooled with a source label and a logistic
model predicts the label under stratified k-fold CV. The pMSE is the mean
squared difference between the held-out propensity scores and the constant
synthetic share c = n_syn / (n_syn + n_real); indistinguishable sources
drive it to 0, perfectly separable equal-sized sources to 0.25. Features
are encoded with a normalization pooled over both tables so neither side
is privileged.
"""

from __future__ import annotations

import numpy as np

from ..data import build_normalization, encode_features, stack_tables
from ..models import LogisticRegressionModel, kfold_indices
from .base import Category, Direction, MetricDescriptor, MetricOutput, sem


def evaluate(ctx, seed, k_folds=5, max_iter=5000):
    n_real = ctx.real.n_rows
    n_syn = ctx.synthetic.n_rows
    if min(n_real, n_syn) < k_folds:
        return METRIC.disabled(f"needs at least {k_folds} rows per table")
    stacked = stack_tables(ctx.real, ctx.synthetic)
    pooled = build_normalization(stacked)
    X = encode_features(stacked, pooled)
    y = np.concatenate([np.zeros(n_real, dtype=np.int64), np.ones(n_syn, dtype=np.int64)])
    c = n_syn / (n_syn + n_real)
    pmse_folds, acc_folds = [], []
    for train, test in kfold_indices(len(y), k=k_folds, seed=seed, labels=y):
        model = LogisticRegressionModel(max_iter=max_iter).fit(X[train], y[train])
        proba = model.predict_proba(X[test])[:, -1]  # classes_ sorted, 1 is last
        pmse_folds.append(float(np.mean((proba - c) ** 2)))
        acc_folds.append(float(np.mean(model.predict(X[test]) == y[test])))
    return METRIC.result(
        outputs=[
            MetricOutput(
                name="p_mse",
                label="Propensity mean squared error",
                value=float(np.mean(pmse_folds)),
                direction=Direction.LOWER_BETTER,
                error=sem(pmse_folds),
            ),
            MetricOutput(
                name="classifier_accuracy",
                label="Propensity classifier accuracy",
                value=float(np.mean(acc_folds)),
                direction=Direction.LOWER_BETTER,
                error=sem(acc_folds),
            ),
        ]
    )


METRIC = MetricDescriptor(
    key="p_mse",
    label="Propensity mean squared error",
    category=Category.UTILITY,
    evaluate=evaluate,
    options={"k_folds": 5, "max_iter": 5000},
)
