"""Utility and privacy evaluation of tabular synthetic data.

Typical library use::

    from syntheval import load_csv, validate_context, resolve_preset, evaluate

    real = load_csv("real.csv")
    fake = load_csv("synthetic.csv")
    ctx = validate_context(real, fake, seed=42)
    results = evaluate(ctx, resolve_preset("full_eval"))
"""

from .data import (
    ColumnKind,
    DistanceKind,
    EvalContext,
    NormalizationSpec,
    Table,
    build_normalization,
    denormalize,
    load_csv,
    normalize,
    validate_context,
)
from .distance import (
    DistanceIndex,
    NeighborResult,
    build_index,
    euclidean_distance,
    gower_distance,
    nn_distances,
)
from .errors import DataError, SynthEvalError, ValidationError
from .framework import (
    DEFAULT_REGISTRY,
    BenchmarkReport,
    EvalConfig,
    MetricRegistry,
    benchmark,
    evaluate,
    load_config,
    rank_linear,
    rank_normal,
    rank_quantile,
    register_plugin,
    resolve_preset,
)
from .metrics import (
    Category,
    Direction,
    MetricDescriptor,
    MetricOutput,
    MetricResult,
)
from .report import ReportDocument, build_document, format_value, render_report

__version__ = "0.1.0"

__all__ = [
    "BenchmarkReport",
    "Category",
    "ColumnKind",
    "DataError",
    "DEFAULT_REGISTRY",
    "Direction",
    "DistanceIndex",
    "DistanceKind",
    "EvalConfig",
    "EvalContext",
    "MetricDescriptor",
    "MetricOutput",
    "MetricRegistry",
    "MetricResult",
    "NeighborResult",
    "NormalizationSpec",
    "ReportDocument",
    "SynthEvalError",
    "Table",
    "ValidationError",
    "benchmark",
    "build_document",
    "build_index",
    "build_normalization",
    "denormalize",
    "euclidean_distance",
    "evaluate",
    "format_value",
    "gower_distance",
    "load_config",
    "load_csv",
    "nn_distances",
    "normalize",
    "rank_linear",
    "rank_normal",
    "rank_quantile",
    "register_plugin",
    "render_report",
    "resolve_preset",
    "validate_context",
]
