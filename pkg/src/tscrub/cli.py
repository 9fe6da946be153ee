"""Command-line front door: clean, report, windows, merge, serve.

``clean`` writes the CleanResult as JSON so the re-rendering subcommands
(``report``, ``windows``) never repeat the expensive work.  All
randomness flows through ``--seed``; identical invocations write
byte-identical output files.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .anomaly import AnomalyConfig
from .benchmark import BenchmarkConfig
from .errors import CleaningError
from .imputation import DEFAULT_METHODS, default_registry, register_external_methods
from .ingest import merge_csv, read_csv, write_csv
from .model import RawTable, result_from_json, result_to_json
from .pipeline import clean
from .report import generate_report
from .timestamps import parse_format_order, render_instant
from .windows import parse_interval_spec, render_frames, split_windows


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tscrub",
        description="Automated cleaning of univariate time series.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_clean = sub.add_parser("clean", help="clean a CSV and write the result JSON")
    p_clean.add_argument("--input", required=True, help="input CSV path")
    p_clean.add_argument("--date-format", required=True,
                         help='component order, e.g. "ymdHMS" or "dmyHM"')
    p_clean.add_argument("--time", default=None, help="time column name")
    p_clean.add_argument("--value", default=None, help="value column name")
    p_clean.add_argument("--methods", default=",".join(DEFAULT_METHODS),
                         help="comma-separated imputation method ids")
    p_clean.add_argument("--external-method", action="append", default=[],
                         metavar="ID=COMMAND",
                         help="register an external imputation command")
    p_clean.add_argument("--no-replace-outliers", action="store_true",
                         help="skip outlier detection and replacement")
    p_clean.add_argument("--alpha", type=float, default=0.05,
                         help="outlier fence width parameter (default 0.05)")
    p_clean.add_argument("--period", type=int, default=None,
                         help="seasonal period override (auto-detected if absent)")
    p_clean.add_argument("--seed", type=int, default=0,
                         help="benchmark RNG seed (default 0)")
    p_clean.add_argument("--sim-fraction", type=float, default=0.10,
                         help="fraction of points masked per benchmark round")
    p_clean.add_argument("--reps", type=int, default=5,
                         help="benchmark repetitions per mechanism")
    p_clean.add_argument("--out", required=True, help="output JSON path")
    p_clean.add_argument("--export-csv", default=None,
                         help="also write the cleaned series as CSV")

    p_report = sub.add_parser("report", help="render a cleaning report")
    p_report.add_argument("--result", required=True, help="CleanResult JSON path")
    p_report.add_argument("--format", choices=("text", "json"), default="text")

    p_windows = sub.add_parser("windows", help="emit per-window SVG frames")
    p_windows.add_argument("--result", required=True, help="CleanResult JSON path")
    p_windows.add_argument("--interval", required=True,
                           help='points per window, or a span like "1 month"')
    p_windows.add_argument("--out-dir", required=True, help="frame output folder")

    p_merge = sub.add_parser("merge", help="outer-join a folder of CSVs on time")
    p_merge.add_argument("--dir", required=True, help="folder of CSV files")
    p_merge.add_argument("--formats", required=True,
                         help="comma-separated candidate date formats")
    p_merge.add_argument("--out", required=True, help="merged CSV path")

    p_serve = sub.add_parser("serve", help="run the HTTP cleaning service")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--data-dir", required=True,
                         help="folder for persisted sessions")
    p_serve.add_argument("--ui-dir", default=None,
                         help="optional static folder served at /ui")
    return parser


def _cmd_clean(args: argparse.Namespace) -> int:
    table = read_csv(args.input)
    registry = default_registry()
    register_external_methods(registry, args.external_method)
    methods = tuple(m.strip() for m in args.methods.split(",") if m.strip())
    for mid in methods:
        if mid not in registry:
            raise CleaningError(f"unknown imputation method {mid!r}")
    cfg = BenchmarkConfig(
        methods=methods, sim_fraction=args.sim_fraction,
        repetitions=args.reps, seed=args.seed,
    )
    a_cfg = AnomalyConfig(
        alpha=args.alpha, period=args.period,
        replace=not args.no_replace_outliers,
    )
    result = clean(
        table, args.date_format, time=args.time, value=args.value,
        replace_outliers=not args.no_replace_outliers,
        benchmark_cfg=cfg, anomaly_cfg=a_cfg, registry=registry,
    )
    Path(args.out).write_text(result_to_json(result) + "\n", encoding="utf-8")
    if args.export_csv:
        data = result.clean_data
        export = RawTable(
            column_names=["time", "value"],
            columns=[
                [render_instant(int(t)) for t in data.times],
                ["" if v != v else repr(float(v)) for v in data.values],
            ],
        )
        write_csv(export, args.export_csv)
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    text = Path(args.result).read_text(encoding="utf-8")
    if args.format == "json":
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        return 0
    result = result_from_json(text)
    sys.stdout.write(generate_report(result))
    return 0


def _cmd_windows(args: argparse.Namespace) -> int:
    result = result_from_json(Path(args.result).read_text(encoding="utf-8"))
    spec = parse_interval_spec(args.interval)
    windows = split_windows(result, spec)
    render_frames(result, windows, args.out_dir)
    print(f"wrote {len(windows)} frames to {args.out_dir}")
    return 0


def _cmd_merge(args: argparse.Namespace) -> int:
    formats = [parse_format_order(f.strip())
               for f in args.formats.split(",") if f.strip()]
    merged = merge_csv(args.dir, formats)
    write_csv(merged, args.out)
    print(f"merged {len(merged.column_names) - 1} columns, "
          f"{merged.row_count} rows to {args.out}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(args.data_dir, ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


_COMMANDS = {
    "clean": _cmd_clean,
    "report": _cmd_report,
    "windows": _cmd_windows,
    "merge": _cmd_merge,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except CleaningError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
