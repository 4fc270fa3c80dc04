"""Command line entry point.

Three subcommands: ``run`` executes a YAML config, ``reproduce`` writes the
CSV bundle behind one figure id, ``list-states`` prints the state catalog.
Exit status 0 when everything ran, 1 when any scenario failed, 2 on a bad
config or bad arguments.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .runner import (DEFAULT_N_POINTS, ENGINE_ALIASES, FIGURE_IDS, ConfigError,
                     parse_config, reproduce, run_scenarios)

__all__ = ["main"]

_STATE_SUMMARIES = (
    ("ghz", "(|000> + |111>)/sqrt(2)"),
    ("w", "(|100> + |010> + |001>)/sqrt(3)"),
    ("wbar", "(|011> + |101> + |110>)/sqrt(3)"),
    ("wwbar", "(w + wbar)/sqrt(2), all six single- and double-excitation strings"),
    ("star", "(|000> + |100> + |101> + |111>)/2, central qubit 2"),
    ("ghz-w", "p * ghz + (1-p) * w projector mixture"),
    ("werner-ghz", "p * ghz + (1-p)/8 * identity"),
    ("werner-w", "p * w + (1-p)/8 * identity"),
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tridephase",
        description="Dephasing dynamics of three-qubit states under local or shared baths.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out-dir", default=".", help="directory for CSV output (default: current)")
    common.add_argument("--engine", choices=sorted(set(ENGINE_ALIASES)), default=None,
                        help="override the propagation engine for every scenario")
    common.add_argument("--threads", type=int, default=1, help="worker threads (default 1)")
    common.add_argument("--points", type=int, default=None,
                        help="override the number of grid points per trace")

    run_p = sub.add_parser("run", parents=[common], help="run every scenario in a YAML config")
    run_p.add_argument("config", help="path to the YAML config file")

    rep_p = sub.add_parser("reproduce", parents=[common], help="write the CSV bundle for a figure id")
    rep_p.add_argument("figure", choices=FIGURE_IDS, help="which bundle to produce")

    sub.add_parser("list-states", help="print the available initial states")
    return parser


def _apply_overrides(scenarios, engine, points):
    if engine is not None:
        scenarios = [replace(sc, engine=ENGINE_ALIASES[engine]) for sc in scenarios]
    if points is not None:
        if points < 2:
            raise ConfigError(f"--points must be >= 2, got {points}")
        scenarios = [replace(sc, n_points=points) for sc in scenarios]
    return scenarios


def _report(results) -> int:
    failed = 0
    for res in results:
        if res.ok:
            print(f"wrote {res.path}")
        else:
            failed += 1
            print(f"FAILED {res.scenario.output}: {res.error}", file=sys.stderr)
    return 1 if failed else 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)

    if args.command == "list-states":
        width = max(len(name) for name, _ in _STATE_SUMMARIES)
        for name, summary in _STATE_SUMMARIES:
            print(f"{name:<{width}}  {summary}")
        return 0

    if args.threads < 1:
        print(f"error: --threads must be >= 1, got {args.threads}", file=sys.stderr)
        return 2

    try:
        if args.command == "run":
            text = Path(args.config).read_text(encoding="utf-8")
            scenarios = _apply_overrides(parse_config(text), args.engine, args.points)
            results = run_scenarios(scenarios, args.out_dir, threads=args.threads)
        else:
            engine = args.engine if args.engine is not None else "closed_form"
            points = args.points if args.points is not None else DEFAULT_N_POINTS
            if points < 2:
                raise ConfigError(f"--points must be >= 2, got {points}")
            results = reproduce(args.figure, args.out_dir, engine=engine,
                                threads=args.threads, n_points=points)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if not results:
        print("no scenarios to run")
    return _report(results)


if __name__ == "__main__":
    sys.exit(main())
