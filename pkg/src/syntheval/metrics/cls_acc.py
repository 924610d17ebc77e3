"""Downstream classification gap between real- and synthetic-trained models.

Four classifier families each predict the target column. The train variant
runs k-fold CV on the real rows: per fold one model trains on the real
training split and a twin (same family, same seed) trains on synthetic
rows, both scored on the held-out real fold. With equal table sizes the
synthetic twin reuses the fold's row indices, so an exact copy with equal
seeds yields a difference of exactly zero; otherwise a seeded subsample of
matching size is drawn. The test variant trains on the full tables and
scores on the holdout split when one exists.
"""

from __future__ import annotations

import numpy as np

from ..models import CLASSIFIER_KINDS, ModelSpec, fit, kfold_indices, scores
from .base import (
    Category,
    Direction,
    MetricDescriptor,
    MetricOutput,
    derive_seed,
    model_features,
    sem,
)


def _f1(y_true, y_pred, f1_type: str) -> float:
    return scores(y_true, y_pred)[f"f1_{f1_type}"]


def _syn_rows(rng, n_syn: int, n_real: int, n_needed: int):
    if n_syn == n_real:
        return None  # caller reuses the real fold indices
    return rng.choice(n_syn, size=n_needed, replace=n_syn < n_needed)


def evaluate(ctx, seed, f1_type="micro", k_folds=5):
    target = ctx.target_column
    if target is None:
        return METRIC.disabled("no target column configured")
    if f1_type not in ("micro", "macro"):
        return METRIC.disabled(f"unknown f1_type {f1_type!r}")
    if ctx.real.n_rows < k_folds:
        return METRIC.disabled(f"needs at least {k_folds} real rows")
    X_real = model_features(ctx, "real", drop=target)
    X_syn = model_features(ctx, "synthetic", drop=target)
    y_real = ctx.real.column(target).values
    y_syn = ctx.synthetic.column(target).values
    n_syn = ctx.synthetic.n_rows

    train_diffs = []
    per_model_train = {}
    folds = kfold_indices(ctx.real.n_rows, k=k_folds, seed=derive_seed(seed, "folds"),
                          labels=y_real)
    for f, (train, test) in enumerate(folds):
        rng = np.random.default_rng(derive_seed(seed, "syn_sample", f))
        syn_rows = _syn_rows(rng, n_syn, ctx.real.n_rows, train.size)
        for kind in CLASSIFIER_KINDS:
            model_seed = derive_seed(seed, kind, f)
            m_real = fit(ModelSpec(kind, seed=model_seed), X_real[train], y_real[train])
            rows = train if syn_rows is None else syn_rows
            m_syn = fit(ModelSpec(kind, seed=model_seed), X_syn[rows], y_syn[rows])
            d = abs(
                _f1(y_real[test], m_real.predict(X_real[test]), f1_type)
                - _f1(y_real[test], m_syn.predict(X_real[test]), f1_type)
            )
            train_diffs.append(d)
            per_model_train.setdefault(kind, []).append(d)

    outputs = [
        MetricOutput(
            name="avg_f1_diff_train",
            label=f"Average F1 {f1_type} difference (train)",
            value=float(np.mean(train_diffs)),
            direction=Direction.LOWER_BETTER,
            error=sem(train_diffs),
        )
    ]
    payload = {
        "kind": "model_bars",
        "models": list(CLASSIFIER_KINDS),
        "train_diff": [float(np.mean(per_model_train[k])) for k in CLASSIFIER_KINDS],
    }
    note = None
    if ctx.holdout is not None:
        X_hold = model_features(ctx, "holdout", drop=target)
        y_hold = ctx.holdout.column(target).values
        test_diffs = []
        for kind in CLASSIFIER_KINDS:
            model_seed = derive_seed(seed, kind, "full")
            m_real = fit(ModelSpec(kind, seed=model_seed), X_real, y_real)
            m_syn = fit(ModelSpec(kind, seed=model_seed), X_syn, y_syn)
            test_diffs.append(
                abs(
                    _f1(y_hold, m_real.predict(X_hold), f1_type)
                    - _f1(y_hold, m_syn.predict(X_hold), f1_type)
                )
            )
        outputs.append(
            MetricOutput(
                name="avg_f1_diff_test",
                label=f"Average F1 {f1_type} difference (holdout)",
                value=float(np.mean(test_diffs)),
                direction=Direction.LOWER_BETTER,
                error=sem(test_diffs),
            )
        )
        payload["test_diff"] = [float(d) for d in test_diffs]
    else:
        note = "no holdout table: train variant only"
    return METRIC.result(outputs=outputs, note=note, plots={"models": payload})


METRIC = MetricDescriptor(
    key="cls_acc",
    label="Classification accuracy difference",
    category=Category.UTILITY,
    evaluate=evaluate,
    options={"f1_type": "micro", "k_folds": 5},
)
