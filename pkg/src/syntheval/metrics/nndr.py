"""Nearest neighbor distance ratio of synthetic records to real ones.

Per synthetic row the ratio of the nearest to the second-nearest real
distance. Values near 0 flag synthetic points glued to single real records
(memorization), values near 1 mean the point sits between real records.
With a holdout table the same ratio against holdout records gives the
privacy loss max(0, NNDR_holdout - NNDR_train): a generator that hugs its
training data scores worse than one equally far from both splits.
"""

from __future__ import annotations

import numpy as np

from .base import Category, Direction, MetricDescriptor, MetricOutput, cross_matrix, sem


def _mean_ratio(dist_to_ref: np.ndarray):
    """Mean d1/d2 over query rows; rows with d2 == 0 cannot be scored."""
    if dist_to_ref.shape[1] < 2:
        return None, 0, "reference table needs at least two rows"
    two = np.sort(np.partition(dist_to_ref, 1, axis=1)[:, :2], axis=1)
    valid = two[:, 1] > 0
    if not valid.any():
        return None, int((~valid).sum()), "every synthetic row has two real records at distance zero"
    ratios = two[valid, 0] / two[valid, 1]
    return ratios, int((~valid).sum()), None


def evaluate(ctx, seed):
    dist_train = cross_matrix(ctx, "real", "synthetic").T  # [n_syn, n_real]
    ratios, skipped, problem = _mean_ratio(dist_train)
    if problem is not None:
        return METRIC.disabled(problem)
    outputs = [
        MetricOutput(
            name="avg_distance_ratio",
            label="Average nearest neighbor distance ratio",
            value=float(np.mean(ratios)),
            direction=Direction.HIGHER_BETTER,
            error=sem(ratios),
        )
    ]
    notes = []
    if skipped:
        notes.append(f"{skipped} synthetic rows skipped (second neighbor at distance 0)")
    if ctx.holdout is not None:
        dist_hold = cross_matrix(ctx, "holdout", "synthetic").T
        ratios_h, _, problem_h = _mean_ratio(dist_hold)
        if problem_h is None:
            loss = max(0.0, float(np.mean(ratios_h)) - float(np.mean(ratios)))
            outputs.append(
                MetricOutput(
                    name="privacy_loss",
                    label="NNDR privacy loss",
                    value=loss,
                    direction=Direction.LOWER_BETTER,
                )
            )
        else:
            notes.append(f"privacy loss unavailable: {problem_h}")
    return METRIC.result(outputs=outputs, note="; ".join(notes) or None)


METRIC = MetricDescriptor(
    key="nndr",
    label="Nearest neighbor distance ratio",
    category=Category.PRIVACY,
    evaluate=evaluate,
)
