"""Shared builders for the test suite.

Tables are built directly from arrays rather than CSV files wherever the
test does not exercise the loading path itself; that keeps the toy data
readable next to the assertion using it.
"""

from __future__ import annotations

import csv

import numpy as np
import pytest

from syntheval.data import Column, ColumnKind, Table


def make_table(spec: dict[str, tuple[str, list]]) -> Table:
    """Table from {name: ("num"|"cat", values)}, in dict order."""
    cols = []
    for name, (kind, values) in spec.items():
        if kind == "num":
            cols.append(Column(name, ColumnKind.NUMERICAL, np.asarray(values, dtype=np.float64)))
        else:
            cols.append(Column(name, ColumnKind.CATEGORICAL, np.asarray(values, dtype=object)))
    return Table(tuple(cols))


def clone_table(table: Table) -> Table:
    return Table(
        tuple(Column(c.name, c.kind, np.array(c.values, copy=True)) for c in table.columns)
    )


def random_mixed_table(rng, n_rows, n_num, n_cat, n_levels=3, prefix=""):
    """Random table with the requested column mix, levels drawn uniformly."""
    spec = {}
    for i in range(n_num):
        scale = float(rng.uniform(0.5, 20.0))
        offset = float(rng.uniform(-50.0, 50.0))
        spec[f"{prefix}num{i}"] = ("num", rng.normal(offset, scale, n_rows))
    levels = [f"lv{j}" for j in range(n_levels)]
    for i in range(n_cat):
        spec[f"{prefix}cat{i}"] = ("cat", rng.choice(levels, n_rows))
    return make_table(spec)


def write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    return str(path)


def table_to_csv(path, table: Table):
    rows = []
    for i in range(table.n_rows):
        row = []
        for c in table.columns:
            v = c.values[i]
            row.append(repr(float(v)) if c.kind is ColumnKind.NUMERICAL else str(v))
        rows.append(row)
    return write_csv(path, table.names, rows)


def run_metric(module, ctx, seed=0, **overrides):
    """Invoke a metric module the way the framework would."""
    options = {**module.METRIC.options, **overrides}
    return module.METRIC.evaluate(ctx, seed, **options)


def outputs_by_name(result):
    return {o.name: o for o in result.outputs}


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


@pytest.fixture
def toy_pair(rng):
    """A small mixed real table and an exact copy of it as synthetic."""
    real = random_mixed_table(rng, 40, n_num=2, n_cat=1)
    return real, clone_table(real)
