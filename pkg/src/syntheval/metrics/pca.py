"""Principal component projection of both tables for visual comparison.

The axes are fit on the standardized real numericals only; synthetic rows
are projected into the same frame. Purely a plotting aid, so the metric
reports no ranked outputs.
"""

from __future__ import annotations

from ..errors import ValidationError
from ..stats import pca_project
from .base import Category, MetricDescriptor, numerical_matrix


def evaluate(ctx, seed):
    real = numerical_matrix(ctx.real)
    if real.shape[1] < 2:
        return METRIC.disabled("needs at least two numerical columns")
    try:
        proj = pca_project(real, numerical_matrix(ctx.synthetic))
    except ValidationError as exc:
        return METRIC.disabled(str(exc))
    payload = {
        "kind": "projection_scatter",
        "real": proj.real_coords.tolist(),
        "synthetic": proj.synthetic_coords.tolist(),
        "explained_variance": proj.explained_variance.tolist(),
        "explained_variance_ratio": proj.explained_variance_ratio.tolist(),
    }
    return METRIC.result(
        note="plot-only metric, no ranked outputs",
        plots={"projection": payload},
    )


METRIC = MetricDescriptor(
    key="pca",
    label="Principal component projection",
    category=Category.UTILITY,
    evaluate=evaluate,
)
