"""Shared plumbing for metric modules: result types and cached context views.

Every metric lives in its own module and exports a ``METRIC`` descriptor;
the registry in :mod:`syntheval.framework` collects them. A metric receives
the evaluation context, a seed derived from the run's master seed and its
own key, and its (already merged) options, and returns a MetricResult. A
metric that cannot run under the given context returns a disabled result
instead of raising.
"""

from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from ..data import ColumnKind, EvalContext, Table, encode_features
from ..distance import distance_matrix, encode_for_distance


class Direction(enum.Enum):
    HIGHER_BETTER = "higher_better"
    LOWER_BETTER = "lower_better"
    UNRANKED = "unranked"


class Category(enum.Enum):
    UTILITY = "utility"
    PRIVACY = "privacy"


@dataclass(frozen=True)
class MetricOutput:
    """One named value a metric reports, with its ranking direction."""

    name: str
    label: str
    value: float
    direction: Direction
    error: float | None = None


@dataclass
class MetricResult:
    metric_key: str
    category: Category
    outputs: list[MetricOutput] = field(default_factory=list)
    note: str | None = None
    error: str | None = None
    plots: dict[str, Any] = field(default_factory=dict)

    @property
    def disabled(self) -> bool:
        return not self.outputs and not self.plots and self.error is None


@dataclass(frozen=True)
class MetricDescriptor:
    """What the registry knows about a metric: key, category, options, entry point.

    ``evaluate`` is called as evaluate(ctx, seed, **options) where options
    are the descriptor defaults overlaid with any per-run overrides.
    """

    key: str
    label: str
    category: Category
    evaluate: Callable[..., MetricResult]
    options: dict[str, Any] = field(default_factory=dict)

    def result(self, **kwargs) -> MetricResult:
        return MetricResult(metric_key=self.key, category=self.category, **kwargs)

    def disabled(self, reason: str) -> MetricResult:
        return MetricResult(
            metric_key=self.key, category=self.category, note=f"disabled: {reason}"
        )


def derive_seed(master: int, *parts) -> int:
    """Stable sub-seed from the master seed and any number of name parts.

    Uses SHA-256 so the value does not depend on interpreter hash
    randomization; the same (master, parts) always maps to the same seed on
    any platform, which is what makes threaded runs reproducible.
    """
    text = "|".join([str(int(master)), *(str(p) for p in parts)])
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def sem(values) -> float | None:
    """Standard error of the mean; None when there is nothing to spread."""
    v = np.asarray(values, dtype=np.float64)
    if v.size < 2:
        return None
    return float(np.std(v, ddof=1) / np.sqrt(v.size))


# ---------------------------------------------------------------------------
# cached context views (distance matrices are the expensive shared part)


def encoded(ctx: EvalContext, name: str):
    """Distance-ready encoding of one of the context tables, cached."""
    return ctx.cached(
        ("encoded", name),
        lambda: encode_for_distance(ctx.tables()[name], ctx.norm),
    )


def cross_matrix(ctx: EvalContext, a: str, b: str) -> np.ndarray:
    """Full pairwise distance matrix between two context tables, cached.

    Only the (a, b) orientation asked for is cached; callers wanting the
    transpose should ask for it directly. Treat the array as read-only.
    """
    return ctx.cached(
        ("dist", a, b, ctx.distance_kind.value),
        lambda: distance_matrix(encoded(ctx, a), encoded(ctx, b), ctx.distance_kind),
    )


def cross_min(ctx: EvalContext, a: str, b: str) -> np.ndarray:
    """Per-row distance from each row of table a to its nearest row of b."""
    return ctx.cached(
        ("dist_min", a, b, ctx.distance_kind.value),
        lambda: cross_matrix(ctx, a, b).min(axis=1),
    )


def loo_min(ctx: EvalContext, name: str) -> np.ndarray:
    """Per-row distance to the nearest *other* row of the same table."""

    def compute():
        mat = cross_matrix(ctx, name, name).copy()
        np.fill_diagonal(mat, np.inf)
        return mat.min(axis=1)

    return ctx.cached(("dist_loo_min", name, ctx.distance_kind.value), compute)


def model_features(ctx: EvalContext, name: str, drop: str | None = None) -> np.ndarray:
    """Learner-ready feature matrix for a context table, cached.

    Numericals are min-max scaled with the shared spec, categoricals become
    integer codes; ``drop`` removes the target column before encoding.
    """

    def compute():
        table = ctx.tables()[name]
        if drop is not None:
            table = table.drop(drop)
        return encode_features(table, ctx.norm)

    return ctx.cached(("features", name, drop), compute)


def numerical_matrix(table: Table) -> np.ndarray:
    cols = [c.values for c in table.columns if c.kind is ColumnKind.NUMERICAL]
    return np.column_stack(cols) if cols else np.empty((table.n_rows, 0))
