"""Report document assembly, JSON round-trip, text rendering, CSV export.

The JSON document is the source of truth; the human-readable table is
derived from it alone. All document fields are deterministic functions of
the input files and configuration (file digests and modification times,
never wall-clock time), so rerunning the same evaluation produces a
byte-identical report.
"""

from __future__ import annotations

import csv
import datetime as dt
import hashlib
import json
import math
import os
from dataclasses import asdict, dataclass, field

from .framework import BenchmarkReport, EvalConfig
from .metrics import Category, Direction, MetricOutput, MetricResult

TOOL_NAME = "syntheval"
TOOL_VERSION = "0.1.0"


def format_value(value: float, error: float | None = None) -> str:
    """Compact numeric display: two significant figures, error in parentheses.

    The parenthesized digits are the error expressed in units of the
    value's last shown digit, the common table notation: 0.0356 with error
    0.011 renders as ``0.036(11)``.
    """
    if value is None or not math.isfinite(value):
        return str(value)
    if error is None or not math.isfinite(error) or error <= 0.0:
        if float(value).is_integer() and abs(value) < 1e15:
            text = f"{value:.1f}" if abs(value) < 1e6 else f"{value:.2g}"
        else:
            text = f"{value:.2g}"
        return text if error is None else f"{text}(0)"
    place = math.floor(math.log10(error)) - 1  # two significant error digits
    digits = round(error / 10.0**place)
    if digits >= 100:
        place += 1
        digits = round(error / 10.0**place)
    if place < 0:
        return f"{value:.{-place}f}({digits})"
    scaled = round(value / 10.0**place) * 10.0**place
    return f"{scaled:.0f}({digits * 10 ** place:.0f})"


def file_fingerprint(path: str) -> dict:
    """Digest and size/mtime of an input file, for provenance."""
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    stat = os.stat(path)
    return {
        "path": str(path),
        "sha256": h.hexdigest(),
        "bytes": stat.st_size,
        "modified": dt.datetime.fromtimestamp(stat.st_mtime, dt.timezone.utc).isoformat(),
    }


@dataclass
class ReportDocument:
    """Everything one run produced, in JSON-serializable form."""

    tool: dict = field(default_factory=lambda: {"name": TOOL_NAME, "version": TOOL_VERSION})
    inputs: dict = field(default_factory=dict)
    context: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)
    results: list[dict] = field(default_factory=list)
    benchmark: dict | None = None

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ReportDocument":
        payload = json.loads(text)
        return cls(**payload)


def result_to_dict(result: MetricResult, plot_files: dict[str, str] | None = None) -> dict:
    return {
        "metric_key": result.metric_key,
        "category": result.category.value,
        "outputs": [
            {
                "name": o.name,
                "label": o.label,
                "value": float(o.value),
                "direction": o.direction.value,
                "error": None if o.error is None else float(o.error),
            }
            for o in result.outputs
        ],
        "note": result.note,
        "error": result.error,
        "plot_files": plot_files or {},
    }


def build_document(
    inputs: dict,
    config: EvalConfig,
    context_info: dict,
    results: list[MetricResult],
    plot_files: dict[str, dict[str, str]] | None = None,
    bench: BenchmarkReport | None = None,
) -> ReportDocument:
    plot_files = plot_files or {}
    doc = ReportDocument(
        inputs=inputs,
        context=context_info,
        config=config.to_json_dict(),
        results=[result_to_dict(r, plot_files.get(r.metric_key)) for r in results],
    )
    if bench is not None:
        doc.benchmark = benchmark_to_dict(bench)
    return doc


def benchmark_to_dict(bench: BenchmarkReport) -> dict:
    return {
        "datasets": bench.dataset_names,
        "strategy": bench.strategy,
        "columns": [
            {
                "metric_key": c.metric_key,
                "output_name": c.output_name,
                "label": c.label,
                "direction": c.direction.value,
                "category": c.category.value,
            }
            for c in bench.columns
        ],
        "raw_values": [
            [float(v) for v in row] for row in bench.raw_values
        ],
        "raw_errors": [
            [None if math.isnan(v) else float(v) for v in row] for row in bench.raw_errors
        ],
        "scores": [[float(v) for v in row] for row in bench.scores],
        "utility_score": bench.utility_score,
        "privacy_score": bench.privacy_score,
        "total_score": bench.total_score,
        "skipped_outputs": bench.skipped_outputs,
        "results": {
            name: [result_to_dict(r) for r in rs] for name, rs in bench.results.items()
        },
    }


# ---------------------------------------------------------------------------
# text rendering (derived from the JSON document only)


def _result_lines(result: dict) -> list[str]:
    key = result["metric_key"]
    if result.get("error"):
        return [f"  {key}: failed ({result['error']})"]
    if not result["outputs"]:
        note = result.get("note") or "disabled"
        if note.startswith("disabled"):
            reason = note.removeprefix("disabled: ")
            return [f"  {key}: disabled ({reason})"]
        return [f"  {key}: {note}"]
    lines = []
    for out in result["outputs"]:
        text = format_value(out["value"], out["error"])
        lines.append(f"  {key:<11} {out['label']:<46} {text}")
    if result.get("note"):
        lines.append(f"  {'':<11} note: {result['note']}")
    return lines


def render_report(doc: ReportDocument) -> str:
    """Fixed-width human-readable twin of the JSON document."""
    lines = [
        "synthetic data evaluation report",
        f"tool: {doc.tool.get('name')} {doc.tool.get('version')}",
    ]
    for role, info in doc.inputs.items():
        shape = f"{info.get('rows')}x{info.get('columns')}"
        lines.append(f"input {role}: {info.get('path')} ({shape})")
    ctx = doc.context
    if ctx:
        lines.append(
            f"distance: {ctx.get('distance')}  seed: {ctx.get('seed')}"
            + (f"  target: {ctx.get('target')}" if ctx.get("target") else "")
        )
    for section, cat in (("Utility", "utility"), ("Privacy", "privacy")):
        rows = [r for r in doc.results if r["category"] == cat]
        if not rows:
            continue
        lines.append("")
        lines.append(section)
        for result in rows:
            lines.extend(_result_lines(result))
    if doc.benchmark:
        lines.append("")
        lines.extend(_benchmark_lines(doc.benchmark))
    return "\n".join(lines) + "\n"


def _benchmark_lines(bench: dict) -> list[str]:
    lines = [f"Benchmark ranking ({bench['strategy']} strategy)"]
    name_w = max([len(n) for n in bench["datasets"]] + [len("dataset")])
    header = f"  {'dataset':<{name_w}} {'utility':>9} {'privacy':>9} {'total':>9}"
    lines.append(header)
    ranked = sorted(
        bench["datasets"], key=lambda n: bench["total_score"][n], reverse=True
    )
    for name in ranked:
        lines.append(
            f"  {name:<{name_w}} "
            f"{bench['utility_score'][name]:>9.3f} "
            f"{bench['privacy_score'][name]:>9.3f} "
            f"{bench['total_score'][name]:>9.3f}"
        )
    if bench["skipped_outputs"]:
        lines.append("  skipped outputs: " + ", ".join(bench["skipped_outputs"]))
    return lines


# ---------------------------------------------------------------------------
# benchmark CSV export


def write_benchmark_csvs(bench: BenchmarkReport, out_dir: str) -> tuple[str, str]:
    """Write the raw-value and score tables; returns their paths.

    Both tables have one row per dataset and one column per ranked output,
    plus the three aggregate rank columns appended.
    """
    raw_path = os.path.join(out_dir, "benchmark_raw.csv")
    score_path = os.path.join(out_dir, "benchmark_scores.csv")
    ids = [c.column_id for c in bench.columns]
    tail = ["rank_utility", "rank_privacy", "rank_total"]
    with open(raw_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["dataset"] + ids + tail)
        for i, name in enumerate(bench.dataset_names):
            writer.writerow(
                [name]
                + [repr(float(v)) for v in bench.raw_values[i]]
                + [
                    repr(bench.utility_score[name]),
                    repr(bench.privacy_score[name]),
                    repr(bench.total_score[name]),
                ]
            )
    with open(score_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["dataset"] + ids + tail)
        for i, name in enumerate(bench.dataset_names):
            writer.writerow(
                [name]
                + [repr(float(v)) for v in bench.scores[i]]
                + [
                    repr(bench.utility_score[name]),
                    repr(bench.privacy_score[name]),
                    repr(bench.total_score[name]),
                ]
            )
    return raw_path, score_path
