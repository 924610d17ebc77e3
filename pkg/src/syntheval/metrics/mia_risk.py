"""Membership inference attack risk via a shadow random forest.

The attacker trains a random forest to separate synthetic rows ("in", the
generator saw their source) from holdout rows ("out"), then labels a mixed
evaluation sample of training-real and holdout rows. Each iteration draws
an equal number of rows from both pools and refits with a fresh seed;
recall on the member class is the headline risk (how many actual members
the attack recovers), reported with macro F1 and precision.
"""

from __future__ import annotations

import numpy as np

from ..models import ModelSpec, fit, precision_recall_f1, scores
from .base import (
    Category,
    Direction,
    MetricDescriptor,
    MetricOutput,
    derive_seed,
    model_features,
    sem,
)


def evaluate(ctx, seed, num_eval_iter=5):
    if ctx.holdout is None:
        return METRIC.disabled("needs a holdout table")
    X_syn = model_features(ctx, "synthetic")
    X_hold = model_features(ctx, "holdout")
    X_real = model_features(ctx, "real")
    X_train = np.vstack([X_syn, X_hold])
    y_train = np.concatenate(
        [np.ones(len(X_syn), dtype=np.int64), np.zeros(len(X_hold), dtype=np.int64)]
    )
    n_eval = min(len(X_real), len(X_hold))
    f1s, precisions, recalls = [], [], []
    for i in range(num_eval_iter):
        iter_seed = derive_seed(seed, i)
        model = fit(ModelSpec("random_forest", seed=iter_seed), X_train, y_train)
        rng = np.random.default_rng(iter_seed)
        rows_r = rng.choice(len(X_real), size=n_eval, replace=False)
        rows_h = rng.choice(len(X_hold), size=n_eval, replace=False)
        X_eval = np.vstack([X_real[rows_r], X_hold[rows_h]])
        y_true = np.concatenate(
            [np.ones(n_eval, dtype=np.int64), np.zeros(n_eval, dtype=np.int64)]
        )
        y_pred = model.predict(X_eval)
        f1s.append(scores(y_true, y_pred)["f1_macro"])
        p, r, _ = precision_recall_f1(y_true, y_pred, 1)
        precisions.append(p)
        recalls.append(r)
    return METRIC.result(
        outputs=[
            MetricOutput(
                name="macro_f1",
                label="MIA classifier macro F1",
                value=float(np.mean(f1s)),
                direction=Direction.LOWER_BETTER,
                error=sem(f1s),
            ),
            MetricOutput(
                name="avg_precision",
                label="MIA precision",
                value=float(np.mean(precisions)),
                direction=Direction.LOWER_BETTER,
                error=sem(precisions),
            ),
            MetricOutput(
                name="avg_recall",
                label="MIA recall (membership risk)",
                value=float(np.mean(recalls)),
                direction=Direction.LOWER_BETTER,
                error=sem(recalls),
            ),
        ]
    )


METRIC = MetricDescriptor(
    key="mia_risk",
    label="Membership inference attack risk",
    category=Category.PRIVACY,
    evaluate=evaluate,
    options={"num_eval_iter": 5},
)
