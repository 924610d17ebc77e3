"""Median distance to closest record, as a ratio to the real-internal one.

Numerator: median over synthetic rows of the distance to the closest real
record. Denominator: median over real rows of the leave-one-out closest
real distance, which calibrates for how tightly the real data itself is
packed. Ratios near 0 mean synthetic rows sit on top of real ones.
"""

from __future__ import annotations

import numpy as np

from ..errors import ValidationError
from .base import Category, Direction, MetricDescriptor, MetricOutput, cross_matrix, loo_min


def evaluate(ctx, seed):
    if ctx.real.n_rows < 2:
        return METRIC.disabled("real table needs at least two rows")
    closest_syn = cross_matrix(ctx, "real", "synthetic").min(axis=0)
    numerator = float(np.median(closest_syn))
    denominator = float(np.median(loo_min(ctx, "real")))
    if denominator == 0.0:
        raise ValidationError(
            "median leave-one-out distance of the real table is zero "
            "(at least half of the real rows are duplicates); the DCR ratio is undefined"
        )
    return METRIC.result(
        outputs=[
            MetricOutput(
                name="median_dcr_ratio",
                label="Median distance to closest record (ratio)",
                value=numerator / denominator,
                direction=Direction.HIGHER_BETTER,
            )
        ]
    )


METRIC = MetricDescriptor(
    key="dcr",
    label="Median distance to closest record",
    category=Category.PRIVACY,
    evaluate=evaluate,
)
