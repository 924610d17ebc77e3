"""Privacy loss derived from nearest neighbor adversarial accuracy.

NNAA is computed twice: synthetic against the training reals, and
synthetic against the holdout rows the generator never saw. A generator
that merely memorizes looks "closer" to its training data, making the
training NNAA lower than the holdout one; the positive part of that gap is
the reported loss.
"""

from __future__ import annotations

from .base import Category, Direction, MetricDescriptor, MetricOutput, derive_seed
from .nnaa import adversarial_accuracy


def evaluate(ctx, seed, n_resample=30):
    if ctx.holdout is None:
        return METRIC.disabled("needs a holdout table")
    if min(ctx.real.n_rows, ctx.synthetic.n_rows, ctx.holdout.n_rows) < 2:
        return METRIC.disabled("leave-one-out distances need at least two rows per table")
    train, _ = adversarial_accuracy(ctx, "real", derive_seed(seed, "train"), n_resample)
    hold, _ = adversarial_accuracy(ctx, "holdout", derive_seed(seed, "holdout"), n_resample)
    return METRIC.result(
        outputs=[
            MetricOutput(
                name="privacy_loss",
                label="NNAA privacy loss",
                value=max(0.0, hold - train),
                direction=Direction.LOWER_BETTER,
            )
        ],
        note=f"train NNAA {train:.4f}, holdout NNAA {hold:.4f}",
    )


METRIC = MetricDescriptor(
    key="nnaa_loss",
    label="NNAA privacy loss",
    category=Category.PRIVACY,
    evaluate=evaluate,
    options={"n_resample": 30},
)
