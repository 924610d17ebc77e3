"""Confidence interval overlap of the real and synthetic column means.

Per numerical column both tables get a normal-approximation CI for the
mean; the overlap score is the average of the overlap length relative to
each interval's own length, floored at zero for disjoint intervals.
Identical intervals score 1, including the degenerate zero-width case.
"""

from __future__ import annotations

import numpy as np

from ..stats import mean_ci
from .base import Category, Direction, MetricDescriptor, MetricOutput, sem


def interval_overlap(ci_a, ci_b) -> float:
    """Symmetric two-interval overlap score in [0, 1]."""
    lo = max(ci_a[0], ci_b[0])
    hi = min(ci_a[1], ci_b[1])
    if hi < lo:
        return 0.0
    terms = []
    for a_lo, a_hi in (ci_a, ci_b):
        width = a_hi - a_lo
        terms.append((hi - lo) / width if width > 0 else 1.0)
    return 0.5 * sum(terms)


def evaluate(ctx, seed, confidence=95.0):
    num_names = ctx.real.numerical_names()
    if not num_names:
        return METRIC.disabled("no numerical columns")
    if ctx.real.n_rows < 2 or ctx.synthetic.n_rows < 2:
        return METRIC.disabled("confidence intervals need at least two rows per table")
    overlaps = []
    disjoint = 0
    for name in num_names:
        ci_r = mean_ci(ctx.real.column(name).values, confidence)
        ci_s = mean_ci(ctx.synthetic.column(name).values, confidence)
        ov = interval_overlap(ci_r, ci_s)
        overlaps.append(ov)
        if min(ci_r[1], ci_s[1]) < max(ci_r[0], ci_s[0]):
            disjoint += 1
    return METRIC.result(
        outputs=[
            MetricOutput(
                name="avg_ci_overlap",
                label="Average confidence interval overlap",
                value=float(np.mean(overlaps)),
                direction=Direction.HIGHER_BETTER,
                error=sem(overlaps),
            ),
            MetricOutput(
                name="non_overlapping_cis",
                label="Non-overlapping confidence intervals",
                value=float(disjoint),
                direction=Direction.LOWER_BETTER,
            ),
            MetricOutput(
                name="frac_non_overlapping_cis",
                label="Fraction of non-overlapping intervals",
                value=disjoint / len(num_names),
                direction=Direction.LOWER_BETTER,
            ),
        ]
    )


METRIC = MetricDescriptor(
    key="cio",
    label="Confidence interval overlap",
    category=Category.UTILITY,
    evaluate=evaluate,
    options={"confidence": 95.0},
)
