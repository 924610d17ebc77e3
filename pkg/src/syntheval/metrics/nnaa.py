"""Nearest neighbor adversarial accuracy between the real and synthetic sets.

For each real row: is its nearest synthetic neighbor farther away than its
nearest other real row (and symmetrically for synthetic rows)? The average
of the two indicator means is 0.5 for well-mixed sets, near 0 for copies,
near 1 for disjoint clouds. When the synthetic table outnumbers the real
one by more than a factor of two, equal-sized synthetic batches are drawn
repeatedly and the results averaged, since the raw statistic is biased for
very unequal set sizes.
"""

from __future__ import annotations

import numpy as np

from .base import (
    Category,
    Direction,
    MetricDescriptor,
    MetricOutput,
    cross_matrix,
    loo_min,
    sem,
)

RESAMPLE_FACTOR = 2


def adversarial_accuracy(ctx, first: str, seed: int, n_resample: int):
    """NNAA of (first, synthetic) with the size-imbalance resampling rule.

    Returns (value, per-resample values or None). ``first`` names the
    context table playing the role of the real data.
    """
    cross = cross_matrix(ctx, first, "synthetic")  # [n_first, n_syn]
    d_ff = loo_min(ctx, first)
    n_first, n_syn = cross.shape
    if n_syn > RESAMPLE_FACTOR * n_first:
        d_ss_full = cross_matrix(ctx, "synthetic", "synthetic")
        rng = np.random.default_rng(seed)
        values = []
        for _ in range(n_resample):
            take = np.sort(rng.choice(n_syn, size=n_first, replace=False))
            sub = cross[:, take]
            d_ss = d_ss_full[np.ix_(take, take)].copy()
            np.fill_diagonal(d_ss, np.inf)
            values.append(_nnaa_terms(sub, d_ff, d_ss.min(axis=1)))
        return float(np.mean(values)), values
    d_ss = loo_min(ctx, "synthetic")
    return _nnaa_terms(cross, d_ff, d_ss), None


def _nnaa_terms(cross, d_ff, d_ss) -> float:
    term_first = float(np.mean(cross.min(axis=1) > d_ff))
    term_syn = float(np.mean(cross.min(axis=0) > d_ss))
    return 0.5 * (term_first + term_syn)


def evaluate(ctx, seed, n_resample=30):
    if ctx.real.n_rows < 2 or ctx.synthetic.n_rows < 2:
        return METRIC.disabled("leave-one-out distances need at least two rows per table")
    value, values = adversarial_accuracy(ctx, "real", seed, n_resample)
    return METRIC.result(
        outputs=[
            MetricOutput(
                name="adversarial_accuracy",
                label="Nearest neighbor adversarial accuracy",
                value=value,
                direction=Direction.LOWER_BETTER,
                error=sem(values) if values is not None else None,
            )
        ],
        note=(
            f"synthetic set resampled {n_resample}x to the real size"
            if values is not None
            else None
        ),
    )


METRIC = MetricDescriptor(
    key="nnaa",
    label="Nearest neighbor adversarial accuracy",
    category=Category.UTILITY,
    evaluate=evaluate,
    options={"n_resample": 30},
)
