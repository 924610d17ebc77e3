"""Starting point for a custom metric module.

Copy this file, fill in the evaluate function, pick a unique key, and
register the descriptor:

    from syntheval.framework import register_plugin
    from my_metric import METRIC

    register_plugin(METRIC)

The evaluate function receives the validated EvalContext, a seed derived
from the run's master seed and the metric key, and the options below as
keyword arguments. Return ``METRIC.disabled(reason)`` when the context
lacks something the metric needs (holdout, target, column kinds) instead
of raising.
"""

from .base import Category, Direction, MetricDescriptor, MetricOutput


def evaluate(ctx, seed, example_option=1.0):
    value = 0.0  # compute something from ctx.real / ctx.synthetic here
    return METRIC.result(
        outputs=[
            MetricOutput(
                name="example_value",
                label="Example value",
                value=value,
                direction=Direction.LOWER_BETTER,
            )
        ]
    )


METRIC = MetricDescriptor(
    key="example",
    label="Example metric",
    category=Category.UTILITY,
    evaluate=evaluate,
    options={"example_option": 1.0},
)
