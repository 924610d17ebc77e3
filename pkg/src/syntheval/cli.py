"""Command line front end: evaluate one synthetic table or benchmark several.

Exit codes: 0 success, 1 validation or usage error, 2 I/O error, 3 at
least one metric failed internally (the report is still written). The
master seed resolves from --seed, then the config file, then the
SYNTHEVAL_SEED environment variable, then 42.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .data import DistanceKind, load_csv, validate_context
from .errors import DataError, SynthEvalError, ValidationError
from .framework import (
    EvalConfig,
    PRESETS,
    benchmark,
    evaluate,
    resolve_preset,
)
from .report import (
    ReportDocument,
    build_document,
    file_fingerprint,
    render_report,
    write_benchmark_csvs,
)

SEED_ENV_VAR = "SYNTHEVAL_SEED"
EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_METRIC_FAILURE = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; the contract here says 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(EXIT_VALIDATION)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="syntheval",
        description="Utility and privacy evaluation of tabular synthetic data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--real", required=True, help="real (training) data CSV")
        p.add_argument("--holdout", help="holdout CSV the generator never saw")
        p.add_argument("--target", help="categorical target column for model metrics")
        p.add_argument(
            "--preset",
            help=f"metric selection preset ({', '.join(PRESETS)}) or a config JSON path",
        )
        p.add_argument("--config", help="config JSON path (alternative to --preset)")
        p.add_argument("--seed", type=int, help="master seed for all randomized metrics")
        p.add_argument(
            "--distance",
            choices=[k.value for k in DistanceKind],
            help="record distance kernel (default gower)",
        )
        p.add_argument("--out", default=".", help="output directory (default: cwd)")
        p.add_argument(
            "--kinds",
            help="JSON file mapping column names to 'num'/'cat', overriding inference",
        )
        p.add_argument("--plots", action="store_true", help="also render SVG plots")
        p.add_argument("--jobs", type=int, default=1, help="metric-level worker threads")

    p_eval = sub.add_parser("evaluate", help="evaluate one synthetic table")
    common(p_eval)
    p_eval.add_argument("--synthetic", required=True, help="synthetic data CSV")

    p_bench = sub.add_parser("benchmark", help="rank several synthetic tables")
    common(p_bench)
    p_bench.add_argument(
        "--synthetic",
        action="append",
        default=[],
        metavar="NAME=PATH",
        help="synthetic candidate as NAME=PATH (repeat; at least two)",
    )
    p_bench.add_argument(
        "--strategy",
        choices=["linear", "normal", "quantile"],
        default="linear",
        help="ranking strategy (default linear)",
    )
    return parser


def _load_kinds(path: str | None) -> dict | None:
    if path is None:
        return None
    with open(path, "r", encoding="utf-8") as fh:
        try:
            kinds = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(kinds, dict) or not all(
        isinstance(k, str) and v in ("num", "cat") for k, v in kinds.items()
    ):
        raise ValidationError(f"{path}: must map column names to 'num' or 'cat'")
    return kinds


def _resolve_config(args) -> EvalConfig:
    if args.preset and args.config:
        raise ValidationError("--preset and --config are mutually exclusive")
    if args.config:
        config = resolve_preset(args.config)
    else:
        config = resolve_preset(args.preset or "full_eval")
    if args.seed is not None:
        config.seed = args.seed
    elif config.seed is None:
        env = os.environ.get(SEED_ENV_VAR)
        config.seed = int(env) if env else 42
    if args.distance is not None:
        config.distance = DistanceKind(args.distance)
    return config


def _write_outputs(out_dir, doc: ReportDocument, config: EvalConfig):
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "used-config.json"), "w", encoding="utf-8") as fh:
        json.dump(config.to_json_dict(), fh, indent=2)
        fh.write("\n")
    with open(os.path.join(out_dir, "report.json"), "w", encoding="utf-8") as fh:
        fh.write(doc.to_json())
    with open(os.path.join(out_dir, "report.txt"), "w", encoding="utf-8") as fh:
        fh.write(render_report(doc))


def _write_plots(out_dir, results, want_svg: bool) -> dict[str, dict[str, str]]:
    plot_files: dict[str, dict[str, str]] = {}
    plots_dir = os.path.join(out_dir, "plots")
    for result in results:
        if not result.plots:
            continue
        os.makedirs(plots_dir, exist_ok=True)
        files = {}
        for name, payload in result.plots.items():
            base = f"{result.metric_key}_{name}"
            json_rel = os.path.join("plots", base + ".json")
            with open(os.path.join(out_dir, json_rel), "w", encoding="utf-8") as fh:
                json.dump(payload, fh, indent=2)
                fh.write("\n")
            files[name] = json_rel
            if want_svg:
                from .plotting import render_svg

                svg_rel = os.path.join("plots", base + ".svg")
                if render_svg(payload, os.path.join(out_dir, svg_rel),
                              title=f"{result.metric_key}: {name}"):
                    files[name + "_svg"] = svg_rel
        plot_files[result.metric_key] = files
    return plot_files


def _context_info(ctx, config: EvalConfig) -> dict:
    return {
        "distance": config.distance.value,
        "seed": config.seed,
        "target": ctx.target_column,
        "rows_real": ctx.real.n_rows,
        "rows_synthetic": ctx.synthetic.n_rows,
        "rows_holdout": None if ctx.holdout is None else ctx.holdout.n_rows,
        "columns": ctx.real.n_cols,
    }


def _input_entry(path, table) -> dict:
    entry = file_fingerprint(path)
    entry["rows"] = table.n_rows
    entry["columns"] = table.n_cols
    return entry


def cmd_evaluate(args) -> int:
    kinds = _load_kinds(args.kinds)
    config = _resolve_config(args)
    real = load_csv(args.real, kinds)
    synthetic = load_csv(args.synthetic, kinds)
    holdout = load_csv(args.holdout, kinds) if args.holdout else None
    ctx = validate_context(
        real,
        synthetic,
        holdout=holdout,
        target_column=args.target,
        seed=config.seed,
        distance_kind=config.distance,
    )
    results = evaluate(ctx, config, jobs=args.jobs)
    inputs = {"real": _input_entry(args.real, real),
              "synthetic": _input_entry(args.synthetic, synthetic)}
    if holdout is not None:
        inputs["holdout"] = _input_entry(args.holdout, holdout)
    os.makedirs(args.out, exist_ok=True)
    plot_files = _write_plots(args.out, results, args.plots)
    doc = build_document(inputs, config, _context_info(ctx, config), results, plot_files)
    _write_outputs(args.out, doc, config)
    print(render_report(doc), end="")
    if any(r.error for r in results):
        return EXIT_METRIC_FAILURE
    return EXIT_OK


def _parse_candidates(pairs) -> dict[str, str]:
    out = {}
    for pair in pairs:
        name, sep, path = pair.partition("=")
        if not sep or not name or not path:
            raise ValidationError(f"--synthetic must look like NAME=PATH, got {pair!r}")
        if name in out:
            raise ValidationError(f"duplicate synthetic dataset name {name!r}")
        out[name] = path
    if len(out) < 2:
        raise ValidationError("benchmark needs at least two --synthetic NAME=PATH entries")
    return out


def cmd_benchmark(args) -> int:
    kinds = _load_kinds(args.kinds)
    config = _resolve_config(args)
    candidates = _parse_candidates(args.synthetic)
    real = load_csv(args.real, kinds)
    holdout = load_csv(args.holdout, kinds) if args.holdout else None
    synthetics = {name: load_csv(path, kinds) for name, path in candidates.items()}
    bench = benchmark(
        real,
        synthetics,
        holdout=holdout,
        target_column=args.target,
        config=config,
        strategy=args.strategy,
        jobs=args.jobs,
    )
    inputs = {"real": _input_entry(args.real, real)}
    if holdout is not None:
        inputs["holdout"] = _input_entry(args.holdout, holdout)
    for name, path in candidates.items():
        inputs[f"synthetic:{name}"] = _input_entry(path, synthetics[name])
    os.makedirs(args.out, exist_ok=True)
    context_info = {
        "distance": config.distance.value,
        "seed": config.seed,
        "target": args.target,
        "datasets": list(candidates),
        "strategy": args.strategy,
    }
    doc = build_document(inputs, config, context_info, [], bench=bench)
    with open(os.path.join(args.out, "report.json"), "w", encoding="utf-8") as fh:
        fh.write(doc.to_json())
    write_benchmark_csvs(bench, args.out)
    print(render_report(doc), end="")
    failed = any(r.error for results in bench.results.values() for r in results)
    return EXIT_METRIC_FAILURE if failed else EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "evaluate":
            return cmd_evaluate(args)
        return cmd_benchmark(args)
    except (ValidationError, DataError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except SynthEvalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
