"""Command line front end.

Four subcommands: ``simulate`` runs the lifetime simulation and writes
a trace file, ``analyze`` turns a trace into metric CSVs, ``report``
renders SVG figures from those outputs, and ``serve`` starts the HTTP
service.  Exit codes: 0 success, 2 bad input (config, trace, names),
3 output could not be written.

Set WSNTOPO_LOG=debug|info|warning|error to control log verbosity.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import os
import sys

from . import __version__
from .analyze import (
    METRIC_GROUPS,
    MissingTimestampError,
    UnknownMetricError,
    analyze_trace,
    distribution_tables,
    read_analysis_csv,
    snapshot_at,
    write_analysis_csv,
    write_distribution_csvs,
)
from .config import ConfigError, SimConfig, load_config
from .figures import (
    DIST_FIGURES,
    FIGURE_NAMES,
    LINE_FIGURES,
    UnknownFigureError,
    render_figure,
)
from .model import Mode, Role, TraceError, trace_read, trace_write
from .sim import Simulation, events_write

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3


def _setup_logging() -> None:
    level_name = os.environ.get("WSNTOPO_LOG", "warning").upper()
    level = getattr(logging, level_name, None)
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(
        level=level, format="%(levelname)s %(name)s: %(message)s"
    )


def _int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part != ""]


def _name_list(text: str) -> list[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _cmd_simulate(args) -> int:
    if args.config:
        cfg = load_config(args.config, seed=args.seed)
    else:
        cfg = SimConfig()
        if args.seed is not None:
            cfg = dataclasses.replace(cfg, seed=args.seed)
        cfg.validate()
    sim = Simulation(cfg)
    trace = sim.run()
    trace_write(trace, args.out)
    if args.events:
        events_write(sim.events, args.events)
    last = trace.snapshots[-1]
    alive = sum(
        1
        for node in last.nodes
        if node.role is Role.SENSOR and node.mode is not Mode.DEAD
    )
    print(
        f"rounds={last.t} snapshots={len(trace.snapshots)} "
        f"alive={alive}/{cfg.n_sensors} trace={args.out}"
    )
    return EXIT_OK


def _cmd_analyze(args) -> int:
    trace = trace_read(args.trace)
    result = analyze_trace(trace, args.metrics)
    write_analysis_csv(result, args.out)
    print(f"wrote {args.out} ({len(result.rows)} rows)")
    if args.dist_at:
        for path in write_distribution_csvs(trace, args.dist_at, args.out):
            print(f"wrote {path}")
    return EXIT_OK


def _cmd_report(args) -> int:
    result = read_analysis_csv(args.csv)
    if args.figures:
        unknown = [f for f in args.figures if f not in FIGURE_NAMES]
        if unknown:
            raise UnknownFigureError(unknown)
        names = args.figures
    else:
        names = list(LINE_FIGURES)
        if args.trace and args.at:
            names += list(DIST_FIGURES)

    tables = None
    needs_dist = [f for f in names if f in DIST_FIGURES]
    if needs_dist:
        if not args.trace or not args.at:
            raise ValueError(
                f"figure(s) {', '.join(needs_dist)} need --trace and --at"
            )
        trace = trace_read(args.trace)
        tables = {
            t: distribution_tables(snapshot_at(trace, t)) for t in args.at
        }

    os.makedirs(args.out_dir, exist_ok=True)
    for name in names:
        rendered = render_figure(name, result=result, tables=tables)
        for out_name, svg in rendered.items():
            path = os.path.join(args.out_dir, f"{out_name}.svg")
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(svg)
            print(f"wrote {path}")
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wsntopo",
        description="Sensor-network lifetime simulation and topology metrics.",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run the simulation, write a trace")
    p.add_argument("--config", help="TOML config file (defaults when omitted)")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.add_argument("--out", required=True, help="trace output path (.jsonl)")
    p.add_argument("--events", help="optional JSON Lines event log output")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("analyze", help="compute metric CSVs from a trace")
    p.add_argument("--trace", required=True, help="trace file from simulate")
    p.add_argument("--out", required=True, help="metrics CSV output path")
    p.add_argument(
        "--metrics",
        type=_name_list,
        help="comma-separated metric groups: " + ", ".join(METRIC_GROUPS),
    )
    p.add_argument(
        "--dist-at",
        type=_int_list,
        help="comma-separated snapshot times for distribution sidecar CSVs",
    )
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("report", help="render SVG figures")
    p.add_argument("--csv", required=True, help="metrics CSV from analyze")
    p.add_argument("--trace", help="trace file, needed for distribution figures")
    p.add_argument(
        "--figures",
        type=_name_list,
        help="comma-separated figure names: " + ", ".join(FIGURE_NAMES),
    )
    p.add_argument(
        "--at",
        type=_int_list,
        help="comma-separated snapshot times for distribution figures",
    )
    p.add_argument("--out-dir", required=True, help="directory for SVG files")
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (
        ConfigError,
        TraceError,
        UnknownMetricError,
        MissingTimestampError,
        UnknownFigureError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
