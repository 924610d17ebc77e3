"""Tabular data containers and the loading/normalization rules shared by all metrics.

A table is a named, ordered collection of columns over two kinds:

* ``NUMERICAL``  -- every cell is a finite real number (float64),
* ``CATEGORICAL`` -- cells are opaque string levels compared for equality only.

Kind is decided per column, either by declaration or by inference: a column
is numerical iff every cell parses as a finite real. Missing values are not
representable; loading rejects them so every metric downstream can assume
complete data.
"""

from __future__ import annotations

import csv
import enum
import math
import threading
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, ValidationError


class ColumnKind(enum.Enum):
    NUMERICAL = "num"
    CATEGORICAL = "cat"


class DistanceKind(enum.Enum):
    GOWER = "gower"
    EUCLIDEAN = "euclidean"


@dataclass(frozen=True)
class Column:
    """One named column with its kind and raw values.

    Numerical columns hold a float64 array, categorical ones an array of
    level strings. Values are never mutated after construction.
    """

    name: str
    kind: ColumnKind
    values: np.ndarray

    def __eq__(self, other):
        if not isinstance(other, Column):
            return NotImplemented
        return (
            self.name == other.name
            and self.kind == other.kind
            and self.values.shape == other.values.shape
            and bool(np.array_equal(self.values, other.values))
        )


@dataclass(frozen=True)
class Table:
    """A rectangular table with unique column names and per-column kinds."""

    columns: tuple[Column, ...]

    def __post_init__(self):
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise DataError(f"duplicate column names: {dupes}")
        lengths = {len(c.values) for c in self.columns}
        if len(lengths) > 1:
            raise DataError(f"columns have unequal lengths: {sorted(lengths)}")

    @property
    def n_rows(self) -> int:
        return len(self.columns[0].values) if self.columns else 0

    @property
    def n_cols(self) -> int:
        return len(self.columns)

    @property
    def names(self) -> list[str]:
        return [c.name for c in self.columns]

    @property
    def kinds(self) -> dict[str, ColumnKind]:
        return {c.name: c.kind for c in self.columns}

    def column(self, name: str) -> Column:
        for c in self.columns:
            if c.name == name:
                return c
        raise KeyError(name)

    def numerical_names(self) -> list[str]:
        return [c.name for c in self.columns if c.kind is ColumnKind.NUMERICAL]

    def categorical_names(self) -> list[str]:
        return [c.name for c in self.columns if c.kind is ColumnKind.CATEGORICAL]

    def select(self, names: list[str]) -> "Table":
        """New table with the given columns, in the given order."""
        return Table(tuple(self.column(n) for n in names))

    def take(self, indices) -> "Table":
        """New table with the given rows (by position, repeats allowed)."""
        idx = np.asarray(indices)
        return Table(tuple(Column(c.name, c.kind, c.values[idx]) for c in self.columns))

    def drop(self, name: str) -> "Table":
        return Table(tuple(c for c in self.columns if c.name != name))

    def __eq__(self, other):
        if not isinstance(other, Table):
            return NotImplemented
        return self.columns == other.columns


def _parse_finite(cell: str) -> float | None:
    """Return the float value of ``cell`` if it is a finite real, else None."""
    try:
        v = float(cell)
    except ValueError:
        return None
    return v if math.isfinite(v) else None


def table_from_rows(
    header: list[str],
    rows: list[list[str]],
    declared_kinds: dict[str, str] | None = None,
) -> Table:
    """Build a Table from string cells, inferring kinds where not declared.

    ``declared_kinds`` maps column names to "num" or "cat" and overrides
    inference. An empty cell anywhere is an error: missing values are
    rejected at the boundary rather than imputed.
    """
    declared = declared_kinds or {}
    for name in declared:
        if name not in header:
            raise DataError(f"declared kind for unknown column {name!r}")
    for kind in declared.values():
        if kind not in ("num", "cat"):
            raise DataError(f"declared kind must be 'num' or 'cat', got {kind!r}")

    n_cols = len(header)
    for i, row in enumerate(rows):
        if len(row) != n_cols:
            raise DataError(f"row {i + 1} has {len(row)} cells, expected {n_cols}")
        for name, cell in zip(header, row):
            if cell == "":
                raise DataError(f"missing value in column {name!r}, row {i + 1}")

    columns = []
    for j, name in enumerate(header):
        cells = [row[j] for row in rows]
        parsed = [_parse_finite(c) for c in cells]
        if declared.get(name) == "num":
            bad = next((i for i, p in enumerate(parsed) if p is None), None)
            if bad is not None:
                raise DataError(
                    f"column {name!r} declared numerical but row {bad + 1} "
                    f"holds {cells[bad]!r}"
                )
            kind = ColumnKind.NUMERICAL
        elif declared.get(name) == "cat":
            kind = ColumnKind.CATEGORICAL
        else:
            kind = (
                ColumnKind.NUMERICAL
                if cells and all(p is not None for p in parsed)
                else ColumnKind.CATEGORICAL
            )
        if kind is ColumnKind.NUMERICAL:
            values = np.array(parsed, dtype=np.float64)
        else:
            values = np.array(cells, dtype=object)
        columns.append(Column(name, kind, values))
    return Table(tuple(columns))


def load_csv(path, declared_kinds: dict[str, str] | None = None) -> Table:
    """Load an RFC-4180 style CSV file (header row required, UTF-8).

    Kind inference follows table_from_rows. Loading the same file twice
    yields equal tables; nothing depends on dict ordering or locale.
    """
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file, expected a header row")
        rows = [row for row in reader if row]
    if not header or all(h == "" for h in header):
        raise DataError(f"{path}: header row is empty")
    try:
        return table_from_rows(header, rows, declared_kinds)
    except DataError as exc:
        raise DataError(f"{path}: {exc}") from exc


@dataclass(frozen=True)
class NormalizationSpec:
    """Frozen per-column normalization state.

    Numerical bounds come from the real table only, so synthetic values
    falling outside the real range keep their (out-of-unit) positions.
    Categorical level lists are the union over all tables in first
    appearance order; level index = position in that list.
    """

    bounds: dict[str, tuple[float, float]]
    levels: dict[str, tuple[str, ...]]

    def value_range(self, name: str) -> float:
        lo, hi = self.bounds[name]
        return hi - lo

    def codes(self, column: Column) -> np.ndarray:
        """Integer level codes for a categorical column."""
        lookup = {lev: i for i, lev in enumerate(self.levels[column.name])}
        try:
            return np.array([lookup[v] for v in column.values], dtype=np.int64)
        except KeyError as exc:
            raise ValidationError(
                f"column {column.name!r} holds level {exc.args[0]!r} unknown "
                f"to the normalization spec"
            ) from exc


def build_normalization(real: Table, *others: Table | None) -> NormalizationSpec:
    """Derive normalization state from the real table plus companion tables."""
    bounds = {}
    levels: dict[str, list[str]] = {}
    for col in real.columns:
        if col.kind is ColumnKind.NUMERICAL:
            bounds[col.name] = (float(col.values.min()), float(col.values.max()))
        else:
            seen = []
            for v in col.values:
                if v not in seen:
                    seen.append(v)
            levels[col.name] = seen
    for other in others:
        if other is None:
            continue
        for name in levels:
            col = other.column(name)
            known = set(levels[name])
            for v in col.values:
                if v not in known:
                    levels[name].append(v)
                    known.add(v)
    return NormalizationSpec(
        bounds=bounds, levels={k: tuple(v) for k, v in levels.items()}
    )


def normalize(table: Table, spec: NormalizationSpec) -> Table:
    """Min-max scale numericals and code categoricals, for model consumption.

    Constant columns (zero range in the spec) map to 0. Values are not
    clipped: out-of-range synthetic values land outside [0, 1] on purpose.
    """
    columns = []
    for col in table.columns:
        if col.kind is ColumnKind.NUMERICAL:
            lo, hi = spec.bounds[col.name]
            if hi > lo:
                values = (col.values - lo) / (hi - lo)
            else:
                values = np.zeros_like(col.values)
            columns.append(Column(col.name, col.kind, values))
        else:
            columns.append(Column(col.name, col.kind, spec.codes(col)))
    return Table(tuple(columns))


def denormalize(table: Table, spec: NormalizationSpec) -> Table:
    """Invert normalize(). Constant numerical columns recover their constant."""
    columns = []
    for col in table.columns:
        if col.kind is ColumnKind.NUMERICAL:
            lo, hi = spec.bounds[col.name]
            values = col.values * (hi - lo) + lo if hi > lo else np.full_like(col.values, lo)
            columns.append(Column(col.name, col.kind, values))
        else:
            levs = np.array(spec.levels[col.name], dtype=object)
            columns.append(Column(col.name, col.kind, levs[col.values.astype(np.int64)]))
    return Table(tuple(columns))


def stack_tables(a: Table, b: Table) -> Table:
    """Concatenate two tables with identical schemas row-wise (a first)."""
    if a.names != b.names:
        raise ValidationError("cannot stack tables with different columns")
    cols = []
    for ca, cb in zip(a.columns, b.columns):
        if ca.kind is not cb.kind:
            raise ValidationError(f"column {ca.name!r} has mixed kinds across tables")
        cols.append(Column(ca.name, ca.kind, np.concatenate([ca.values, cb.values])))
    return Table(tuple(cols))


def encode_features(table: Table, spec: NormalizationSpec) -> np.ndarray:
    """Dense float matrix for learners: scaled numericals, coded categoricals."""
    norm = normalize(table, spec)
    if not norm.columns:
        return np.empty((table.n_rows, 0))
    return np.column_stack([c.values.astype(np.float64) for c in norm.columns])


@dataclass
class EvalContext:
    """Everything one evaluation run needs: the tables, target, seed, distance.

    ``holdout`` rows were never shown to the generator that produced
    ``synthetic``; metrics needing that split disable themselves when it is
    absent. The context also owns the NormalizationSpec and a small cache of
    pairwise distance matrices shared by neighbor-based metrics (guarded by
    a lock: metrics may run on worker threads).
    """

    real: Table
    synthetic: Table
    holdout: Table | None = None
    target_column: str | None = None
    seed: int = 42
    distance_kind: DistanceKind = DistanceKind.GOWER
    norm: NormalizationSpec = field(init=False, repr=False)
    _cache: dict = field(init=False, repr=False, default_factory=dict)
    _cache_lock: threading.Lock = field(init=False, repr=False)

    def __post_init__(self):
        self.norm = build_normalization(self.real, self.synthetic, self.holdout)
        self._cache_lock = threading.Lock()

    def tables(self) -> dict[str, Table]:
        out = {"real": self.real, "synthetic": self.synthetic}
        if self.holdout is not None:
            out["holdout"] = self.holdout
        return out

    def cached(self, key, compute):
        """Compute-once cache for pure derived values (distance matrices)."""
        with self._cache_lock:
            if key in self._cache:
                return self._cache[key]
        value = compute()
        with self._cache_lock:
            return self._cache.setdefault(key, value)


def _check_alignment(real: Table, other: Table, label: str) -> Table:
    """Reorder ``other``'s columns to the real table's order; verify kinds."""
    missing = [n for n in real.names if n not in other.names]
    extra = [n for n in other.names if n not in real.names]
    if missing or extra:
        parts = []
        if missing:
            parts.append(f"missing {missing}")
        if extra:
            parts.append(f"unexpected {extra}")
        raise ValidationError(f"{label} table columns do not match real: " + ", ".join(parts))
    aligned = other.select(real.names)
    for rc, oc in zip(real.columns, aligned.columns):
        if rc.kind is not oc.kind:
            raise ValidationError(
                f"column {rc.name!r} is {rc.kind.value} in real but "
                f"{oc.kind.value} in {label}"
            )
    return aligned


def validate_context(
    real: Table,
    synthetic: Table,
    holdout: Table | None = None,
    target_column: str | None = None,
    seed: int = 42,
    distance_kind: DistanceKind = DistanceKind.GOWER,
) -> EvalContext:
    """Check cross-table consistency and assemble an EvalContext.

    Synthetic and holdout columns are aligned to the real table's order by
    name; any name or kind mismatch is an error. The target column, when
    given, must exist and be categorical.
    """
    if real.n_cols == 0 or real.n_rows == 0:
        raise ValidationError("real table must have at least one row and one column")
    if synthetic.n_rows == 0:
        raise ValidationError("synthetic table has no rows")
    synthetic = _check_alignment(real, synthetic, "synthetic")
    if holdout is not None:
        if holdout.n_rows == 0:
            raise ValidationError("holdout table has no rows")
        holdout = _check_alignment(real, holdout, "holdout")
    if target_column is not None:
        if target_column not in real.names:
            raise ValidationError(f"target column {target_column!r} not in table")
        if real.column(target_column).kind is not ColumnKind.CATEGORICAL:
            raise ValidationError(
                f"target column {target_column!r} must be categorical"
            )
    if not isinstance(distance_kind, DistanceKind):
        distance_kind = DistanceKind(distance_kind)
    return EvalContext(
        real=real,
        synthetic=synthetic,
        holdout=holdout,
        target_column=target_column,
        seed=int(seed),
        distance_kind=distance_kind,
    )
