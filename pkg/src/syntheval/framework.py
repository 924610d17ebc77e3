"""Metric registry, run configuration, evaluation loop, ranking, benchmark.

The registry maps metric keys to descriptors; a run configuration names an
ordered subset of keys with option overrides plus a master seed and
distance kind. Each metric gets its own seed derived from (master seed,
metric key), which makes results independent of execution order, so
metrics can run on a thread pool without affecting the report.
"""

from __future__ import annotations

import json
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .data import DistanceKind, EvalContext, Table, validate_context
from .errors import ValidationError
from .metrics import ALL_METRICS, Category, Direction, MetricDescriptor, MetricResult
from .metrics.base import derive_seed

PRESETS = ("full_eval", "fast_eval", "priv_eval")
FAST_EVAL_KEYS = ("dwm", "cio", "corr_diff", "ks_test", "h_dist", "hit_rate", "dcr", "nndr")


class MetricRegistry:
    """Ordered key -> descriptor mapping with duplicate protection."""

    def __init__(self, descriptors=()):
        self._metrics: dict[str, MetricDescriptor] = {}
        for d in descriptors:
            self.register(d)

    def register(self, descriptor: MetricDescriptor):
        if descriptor.key in self._metrics:
            raise ValidationError(f"metric key {descriptor.key!r} is already registered")
        self._metrics[descriptor.key] = descriptor

    def get(self, key: str) -> MetricDescriptor:
        try:
            return self._metrics[key]
        except KeyError:
            raise ValidationError(
                f"unknown metric key {key!r}; registered: {', '.join(self._metrics)}"
            ) from None

    def keys(self) -> list[str]:
        return list(self._metrics)

    def items(self):
        return self._metrics.items()

    def __contains__(self, key: str) -> bool:
        return key in self._metrics

    def copy(self) -> "MetricRegistry":
        return MetricRegistry(self._metrics.values())


DEFAULT_REGISTRY = MetricRegistry(ALL_METRICS)


def register_plugin(descriptor: MetricDescriptor, registry: MetricRegistry | None = None):
    """Add a user metric to the (default) registry."""
    (registry or DEFAULT_REGISTRY).register(descriptor)


@dataclass
class EvalConfig:
    """An ordered metric selection plus the run-level knobs.

    ``metrics`` holds (key, option overrides) pairs; overrides only list
    what differs from the descriptor defaults. ``seed`` of None defers to
    the context's seed.
    """

    metrics: list[tuple[str, dict]] = field(default_factory=list)
    seed: int | None = None
    distance: DistanceKind = DistanceKind.GOWER
    preset: str | None = None

    def to_json_dict(self) -> dict:
        return {
            "metrics": {key: dict(opts) for key, opts in self.metrics},
            "seed": self.seed,
            "distance": self.distance.value,
        }

    @classmethod
    def from_json_dict(cls, payload: dict, registry: MetricRegistry | None = None) -> "EvalConfig":
        registry = registry or DEFAULT_REGISTRY
        if not isinstance(payload, dict):
            raise ValidationError("config must be a JSON object")
        unknown_top = set(payload) - {"metrics", "seed", "distance"}
        if unknown_top:
            raise ValidationError(f"unknown config fields: {sorted(unknown_top)}")
        metrics_obj = payload.get("metrics")
        if not isinstance(metrics_obj, dict) or not metrics_obj:
            raise ValidationError("config needs a non-empty 'metrics' object")
        metrics = []
        for key, opts in metrics_obj.items():
            descriptor = registry.get(key)
            if opts is None:
                opts = {}
            if not isinstance(opts, dict):
                raise ValidationError(f"options of metric {key!r} must be an object")
            unknown = set(opts) - set(descriptor.options)
            if unknown:
                raise ValidationError(
                    f"unknown options {sorted(unknown)} for metric {key!r}; "
                    f"known: {sorted(descriptor.options) or 'none'}"
                )
            metrics.append((key, dict(opts)))
        seed = payload.get("seed")
        if seed is not None and not isinstance(seed, int):
            raise ValidationError("config 'seed' must be an integer")
        distance = payload.get("distance", DistanceKind.GOWER.value)
        try:
            distance = DistanceKind(distance)
        except ValueError:
            raise ValidationError(
                f"config 'distance' must be one of "
                f"{[k.value for k in DistanceKind]}, got {distance!r}"
            ) from None
        return cls(metrics=metrics, seed=seed, distance=distance)


def load_config(path, registry: MetricRegistry | None = None) -> EvalConfig:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: not valid JSON ({exc})") from exc
    return EvalConfig.from_json_dict(payload, registry)


def resolve_preset(name_or_path: str, registry: MetricRegistry | None = None) -> EvalConfig:
    """Turn a preset name, or a path to a config JSON file, into an EvalConfig."""
    registry = registry or DEFAULT_REGISTRY
    if name_or_path == "full_eval":
        config = EvalConfig(metrics=[(k, {}) for k in registry.keys()])
    elif name_or_path == "fast_eval":
        config = EvalConfig(metrics=[(k, {}) for k in FAST_EVAL_KEYS if k in registry])
    elif name_or_path == "priv_eval":
        config = EvalConfig(
            metrics=[
                (k, {}) for k, d in registry.items() if d.category is Category.PRIVACY
            ]
        )
    elif os.path.exists(name_or_path):
        return load_config(name_or_path, registry)
    else:
        raise ValidationError(
            f"{name_or_path!r} is neither a preset ({', '.join(PRESETS)}) "
            f"nor an existing config file"
        )
    config.preset = name_or_path
    return config


def evaluate(
    ctx: EvalContext,
    config: EvalConfig | None = None,
    registry: MetricRegistry | None = None,
    jobs: int = 1,
) -> list[MetricResult]:
    """Run the configured metrics over the context.

    Results come back in configuration order. A metric that raises is
    reported as a failed result instead of aborting the run. ``jobs`` > 1
    runs metrics on a thread pool; seeds are derived per metric key, so
    the schedule cannot change any value.
    """
    if config is None:
        config = resolve_preset("full_eval", registry)
    registry = registry or DEFAULT_REGISTRY
    master = config.seed if config.seed is not None else ctx.seed
    tasks = []
    for key, overrides in config.metrics:
        descriptor = registry.get(key)
        unknown = set(overrides) - set(descriptor.options)
        if unknown:
            raise ValidationError(f"unknown options {sorted(unknown)} for metric {key!r}")
        options = {**descriptor.options, **overrides}
        tasks.append((descriptor, derive_seed(master, key), options))

    def run(task) -> MetricResult:
        descriptor, seed, options = task
        try:
            return descriptor.evaluate(ctx, seed, **options)
        except Exception as exc:  # deliberate: one failure must not kill the run
            return MetricResult(
                metric_key=descriptor.key,
                category=descriptor.category,
                error=f"{type(exc).__name__}: {exc}",
            )

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(run, tasks))
    return [run(t) for t in tasks]


# ---------------------------------------------------------------------------
# ranking strategies


def _oriented(values, direction: Direction) -> np.ndarray:
    """Values flipped so that larger is always better."""
    v = np.asarray(values, dtype=np.float64)
    return v if direction is Direction.HIGHER_BETTER else -v


def rank_linear(values, direction: Direction) -> np.ndarray:
    """Min-max score: best 1, worst 0, linear in between; all equal gives 0.5."""
    v = _oriented(values, direction)
    lo, hi = v.min(), v.max()
    if hi == lo:
        return np.full(v.shape, 0.5)
    return (v - lo) / (hi - lo)


def rank_normal(values, direction: Direction) -> np.ndarray:
    """Extremes-only score: best 1, worst 0, everything between 0.5.

    Ties share the extreme score; an all-equal vector is scored neutrally
    at 0.5 like rank_linear.
    """
    v = _oriented(values, direction)
    lo, hi = v.min(), v.max()
    if hi == lo:
        return np.full(v.shape, 0.5)
    out = np.full(v.shape, 0.5)
    out[v == hi] = 1.0
    out[v == lo] = 0.0
    return out


def rank_quantile(values, direction: Direction) -> np.ndarray:
    """Quartile score 3/2/1/0 from best to worst.

    Positions, not values, define the quartiles; tied values all take the
    best score within their tie group, so an all-equal vector scores 3
    everywhere. Fewer than 4 values cannot fill 4 quartiles, which earns a
    warning rather than an error.
    """
    v = _oriented(values, direction)
    n = v.size
    if n < 4:
        warnings.warn(
            f"quantile ranking over {n} datasets cannot fill 4 quartiles",
            stacklevel=2,
        )
    order = np.argsort(-v, kind="stable")  # best first, stable by dataset index
    provisional = np.empty(n, dtype=np.float64)
    provisional[order] = 3 - (np.arange(n) * 4) // n
    out = provisional.copy()
    for value in np.unique(v):
        group = v == value
        out[group] = provisional[group].max()
    return out


_STRATEGIES = {
    "linear": rank_linear,
    "normal": rank_normal,
    "quantile": rank_quantile,
}


def rank_scores(values, direction: Direction, strategy: str = "linear") -> np.ndarray:
    try:
        fn = _STRATEGIES[strategy]
    except KeyError:
        raise ValidationError(
            f"unknown ranking strategy {strategy!r}; known: {sorted(_STRATEGIES)}"
        ) from None
    return fn(values, direction)


# ---------------------------------------------------------------------------
# benchmark


@dataclass(frozen=True)
class RankedColumn:
    """Identity of one ranked output column in a benchmark table."""

    metric_key: str
    output_name: str
    label: str
    direction: Direction
    category: Category

    @property
    def column_id(self) -> str:
        return f"{self.metric_key}.{self.output_name}"


@dataclass
class BenchmarkReport:
    dataset_names: list[str]
    strategy: str
    results: dict[str, list[MetricResult]]
    columns: list[RankedColumn]
    raw_values: np.ndarray  # [n_datasets, n_columns]
    raw_errors: np.ndarray  # same shape, nan where absent
    scores: np.ndarray  # [n_datasets, n_columns]
    utility_score: dict[str, float]
    privacy_score: dict[str, float]
    total_score: dict[str, float]
    skipped_outputs: list[str]


def benchmark(
    real: Table,
    synthetics: dict[str, Table],
    holdout: Table | None = None,
    target_column: str | None = None,
    config: EvalConfig | None = None,
    strategy: str = "linear",
    registry: MetricRegistry | None = None,
    jobs: int = 1,
) -> BenchmarkReport:
    """Evaluate several synthetic candidates and rank them.

    Every candidate is validated and evaluated under the same config and
    master seed. Each ranked output (any metric output with a direction)
    becomes a score column; utility and privacy scores are the per-category
    sums and the total their sum. Outputs missing for any candidate (a
    metric disabled or failed there) are skipped so scores stay comparable.
    """
    if strategy not in _STRATEGIES:
        raise ValidationError(
            f"unknown ranking strategy {strategy!r}; known: {sorted(_STRATEGIES)}"
        )
    if len(synthetics) < 2:
        raise ValidationError("benchmark needs at least two synthetic datasets")
    if config is None:
        config = resolve_preset("full_eval", registry)
    results: dict[str, list[MetricResult]] = {}
    for name, synthetic in synthetics.items():
        try:
            ctx = validate_context(
                real,
                synthetic,
                holdout=holdout,
                target_column=target_column,
                seed=config.seed if config.seed is not None else 42,
                distance_kind=config.distance,
            )
        except ValidationError as exc:
            raise ValidationError(f"dataset {name!r}: {exc}") from exc
        results[name] = evaluate(ctx, config, registry=registry, jobs=jobs)

    names = list(synthetics)
    columns: list[RankedColumn] = []
    values: list[np.ndarray] = []
    errors: list[np.ndarray] = []
    skipped: list[str] = []
    registry = registry or DEFAULT_REGISTRY
    first = results[names[0]]
    for pos, result in enumerate(first):
        per_dataset = [results[n][pos] for n in names]
        by_name = [{o.name: o for o in r.outputs} for r in per_dataset]
        for output in result.outputs:
            if output.direction is Direction.UNRANKED:
                continue
            column = RankedColumn(
                metric_key=result.metric_key,
                output_name=output.name,
                label=output.label,
                direction=output.direction,
                category=result.category,
            )
            if all(output.name in m for m in by_name):
                values.append(np.array([m[output.name].value for m in by_name]))
                errors.append(
                    np.array(
                        [
                            np.nan if m[output.name].error is None else m[output.name].error
                            for m in by_name
                        ]
                    )
                )
                columns.append(column)
            else:
                skipped.append(column.column_id)
        # an output present in other datasets but not the first is also skipped
        extra = set().union(*(set(m) for m in by_name)) - {o.name for o in result.outputs}
        for out_name in sorted(extra):
            skipped.append(f"{result.metric_key}.{out_name}")

    raw = np.column_stack(values) if values else np.empty((len(names), 0))
    errs = np.column_stack(errors) if errors else np.empty((len(names), 0))
    score_cols = [
        rank_scores(raw[:, j], columns[j].direction, strategy) for j in range(len(columns))
    ]
    score_mat = np.column_stack(score_cols) if score_cols else np.empty((len(names), 0))
    utility = np.zeros(len(names))
    privacy = np.zeros(len(names))
    for j, col in enumerate(columns):
        if col.category is Category.UTILITY:
            utility += score_mat[:, j]
        else:
            privacy += score_mat[:, j]
    return BenchmarkReport(
        dataset_names=names,
        strategy=strategy,
        results=results,
        columns=columns,
        raw_values=raw,
        raw_errors=errs,
        scores=score_mat,
        utility_score={n: float(utility[i]) for i, n in enumerate(names)},
        privacy_score={n: float(privacy[i]) for i, n in enumerate(names)},
        total_score={n: float(utility[i] + privacy[i]) for i, n in enumerate(names)},
        skipped_outputs=skipped,
    )
