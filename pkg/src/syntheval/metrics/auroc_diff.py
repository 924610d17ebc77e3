"""AUROC difference of a real-trained and a synthetic-trained classifier.

Both models predict the (binary) target column and are scored on the
holdout rows, so the comparison never touches generator training data. The
metric needs a binary target and a holdout split; otherwise it disables
itself.
"""

from __future__ import annotations

import numpy as np

from ..models import ModelSpec, auroc, fit
from .base import (
    Category,
    Direction,
    MetricDescriptor,
    MetricOutput,
    derive_seed,
    model_features,
)


def _roc_points(y_true, scores, positive):
    order = np.argsort(-np.asarray(scores, dtype=np.float64), kind="stable")
    truth = (np.asarray(y_true)[order] == positive).astype(np.float64)
    tp = np.concatenate([[0.0], np.cumsum(truth)])
    fp = np.concatenate([[0.0], np.cumsum(1.0 - truth)])
    n_pos = max(truth.sum(), 1.0)
    n_neg = max(len(truth) - truth.sum(), 1.0)
    return (fp / n_neg).tolist(), (tp / n_pos).tolist()


def evaluate(ctx, seed, model="log_reg"):
    target = ctx.target_column
    if target is None:
        return METRIC.disabled("no target column configured")
    if ctx.holdout is None:
        return METRIC.disabled("needs a holdout table")
    levels = ctx.norm.levels[target]
    if len(levels) != 2:
        return METRIC.disabled(f"target must be binary, has {len(levels)} levels")
    positive = sorted(levels)[1]
    y_hold = ctx.holdout.column(target).values
    if np.unique(y_hold).size < 2:
        return METRIC.disabled("holdout target has a single level")
    aucs = {}
    curves = []
    for role in ("real", "synthetic"):
        table = ctx.tables()[role]
        y_train = table.column(target).values
        if np.unique(y_train).size < 2:
            return METRIC.disabled(f"{role} target has a single level")
        clf = fit(
            ModelSpec(model, seed=derive_seed(seed, role)),
            model_features(ctx, role, drop=target),
            y_train,
        )
        col = list(clf.classes_).index(positive)
        scores_ = clf.predict_proba(model_features(ctx, "holdout", drop=target))[:, col]
        aucs[role] = auroc(y_hold, scores_, positive)
        fpr, tpr = _roc_points(y_hold, scores_, positive)
        curves.append({"label": f"{role}-trained", "fpr": fpr, "tpr": tpr, "auroc": aucs[role]})
    return METRIC.result(
        outputs=[
            MetricOutput(
                name="auroc_difference",
                label="AUROC difference on holdout",
                value=abs(aucs["real"] - aucs["synthetic"]),
                direction=Direction.LOWER_BETTER,
            )
        ],
        plots={"roc": {"kind": "roc_curves", "curves": curves}},
    )


METRIC = MetricDescriptor(
    key="auroc_diff",
    label="AUROC difference",
    category=Category.UTILITY,
    evaluate=evaluate,
    options={"model": "log_reg"},
)
