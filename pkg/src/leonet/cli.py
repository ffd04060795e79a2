"""Command-line entry point: ``leonet <subcommand> [--config PATH] [--seed N] [--out DIR] [--threads N]``.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 internal
invariant breach.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .config import SimulationConfig, load_config
from .constellation import Constellation
from .driver import (
    iter_baseline,
    iter_robustness,
    run_coverage,
    single_shell_comparison,
    snapshot_at,
    summarize_robustness,
)
from .errors import ConfigurationError, DataError, InvariantError
from .metrics import METRIC_COLUMNS
from .report import (
    BETWEENNESS_COLUMNS,
    EDGE_COLUMNS,
    ROBUSTNESS_COLUMNS,
    SHELL_COMPARISON_COLUMNS,
    CsvSink,
    metrics_values,
    write_betweenness,
    write_coverage,
    write_edges,
    write_metrics,
    write_satellites,
)

log = logging.getLogger("leonet")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_INVARIANT = 4


def _common(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = argparse.SUPPRESS if suppress else None
    parser.add_argument("--config", type=Path, default=d, help="JSON configuration file (defaults built in)")
    parser.add_argument("--seed", type=int, default=d, help="override the configured seeds with this one")
    parser.add_argument("--out", type=Path, default=d, help="output directory (overrides output_dir)")
    parser.add_argument("--threads", type=int, default=d, help="worker threads for metric evaluation")
    parser.add_argument(
        "--no-figures", action="store_true", default=argparse.SUPPRESS if suppress else False,
        help="write CSV reports only",
    )  # fmt: skip
    parser.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS if suppress else False)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="leonet", description="Multi-shell LEO constellation graph analytics")
    _common(parser, suppress=False)
    shared = argparse.ArgumentParser(add_help=False)
    _common(shared, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("generate", parents=[shared], help="write the satellite roster and single-shell D/APL table")

    p = sub.add_parser("snapshot", parents=[shared], help="metrics for a single instant")
    p.add_argument("--time", type=float, default=0.0, help="simulation time in seconds (default 0)")
    p.add_argument("--edges", action="store_true", help="also dump the edge list")

    sub.add_parser("baseline", parents=[shared], help="metric time series over the configured duration")
    p = sub.add_parser("robustness", parents=[shared], help="gateway dropout sweep")
    p.add_argument("--probabilities", type=float, nargs="+", help="override the configured dropout sweep")
    sub.add_parser("coverage", parents=[shared], help="coverage density versus latitude")
    return parser


def _load(args) -> SimulationConfig:
    config = load_config(args.config) if args.config else SimulationConfig()
    if args.seed is not None:
        if args.seed < 0:
            raise ConfigurationError("--seed must be non-negative")
        config = config.with_seed(args.seed)
    if args.out is not None:
        config = replace(config, output_dir=str(args.out.resolve()))
    if getattr(args, "probabilities", None):
        config = replace(config, dropout_sweep=tuple(args.probabilities))
    if args.threads is not None and args.threads < 1:
        raise ConfigurationError("--threads must be >= 1")
    return config


def cmd_generate(config: SimulationConfig, args) -> None:
    out = config.output_path()
    write_satellites(out / "satellites.csv", Constellation(config.shells))
    with CsvSink(out / "shells.csv", SHELL_COMPARISON_COLUMNS) as sink:
        for c in single_shell_comparison(config, threads=args.threads):
            sink.write((c.shell, c.style, c.seam, c.diameter, c.apl, c.reference_diameter, c.reference_apl, c.note))
            print(f"{c.shell} {c.style} seam={c.seam}: D={c.diameter:g} APL={c.apl:.2f} ({c.note})")


def cmd_snapshot(config: SimulationConfig, args) -> None:
    out = config.output_path()
    report, snap = snapshot_at(config, args.time, threads=args.threads)
    with CsvSink(out / "snapshot.csv", METRIC_COLUMNS) as sink:
        write_metrics(sink, report)
    with CsvSink(out / "snapshot_betweenness.csv", BETWEENNESS_COLUMNS) as sink:
        write_betweenness(sink, report, snap)
    if args.edges:
        write_edges(out / "edges.csv", snap)
    print(f"t={report.time:g} nodes={report.node_count} components={report.component_count} "
          f"D={report.diameter:g} APL={report.apl:.3f} div_bc={report.div_bc}")  # fmt: skip


def cmd_baseline(config: SimulationConfig, args) -> None:
    out = config.output_path()
    reports = []
    with CsvSink(out / "metrics.csv", METRIC_COLUMNS) as ms, CsvSink(out / "betweenness.csv", BETWEENNESS_COLUMNS) as bs:
        for report, snap in iter_baseline(config, threads=args.threads):
            write_metrics(ms, report)
            write_betweenness(bs, report, snap)
            reports.append(report)
            log.info("t=%g components=%d D=%g APL=%.3f", report.time, report.component_count, report.diameter, report.apl)
    if not args.no_figures and reports:
        from .plotting import plot_baseline

        plot_baseline(reports, out / "baseline.png")


def cmd_robustness(config: SimulationConfig, args) -> None:
    out = config.output_path()
    rows = []
    with CsvSink(out / "robustness.csv", ROBUSTNESS_COLUMNS) as sink:
        for row, _ in iter_robustness(config, threads=args.threads):
            sink.write([row.probability, row.window] + metrics_values(row.report))
            rows.append(row)
            log.info("p=%g window=%d components=%d APL=%.3f", row.probability, row.window,
                     row.report.component_count, row.report.apl)  # fmt: skip
    summary = summarize_robustness(rows)
    keys = [c for c in METRIC_COLUMNS if c != "t"]
    with CsvSink(out / "robustness_summary.csv", ("dropout_p",) + tuple(keys)) as sink:
        for p, means in summary.items():
            sink.write([p] + [means[k] for k in keys])
    if not args.no_figures and rows:
        from .plotting import plot_robustness

        plot_robustness(summary, out / "robustness.png")


def cmd_coverage(config: SimulationConfig, args) -> None:
    out = config.output_path()
    profile = run_coverage(config)
    write_coverage(out / "coverage.csv", profile)
    if not args.no_figures:
        from .plotting import plot_coverage

        plot_coverage(profile, out / "coverage.png")


COMMANDS = {
    "generate": cmd_generate,
    "snapshot": cmd_snapshot,
    "baseline": cmd_baseline,
    "robustness": cmd_robustness,
    "coverage": cmd_coverage,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    config = None
    try:
        config = _load(args)
        COMMANDS[args.command](config, args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except InvariantError as exc:
        print(f"internal invariant breach: {exc}", file=sys.stderr)
        rows = getattr(exc, "dump_rows", None)
        if rows is not None and config is not None:
            dump = config.output_path() / "invariant_dump.csv"
            with CsvSink(dump, EDGE_COLUMNS) as sink:
                for row in rows:
                    sink.write(row)
            print(f"offending snapshot written to {dump}", file=sys.stderr)
        return EXIT_INVARIANT
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
