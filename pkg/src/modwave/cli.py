"""Command-line interface: spectrum, scan, figure and validate subcommands.

All numeric output is in units of gamma_1D. Results go to CSV by default;
an output path ending in .json selects the JSON document format instead.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .model import SystemConfig
from .sweep import (AXIS_PARAMETERS, ENGINES, FIGURE_IDS, OBSERVABLES, ScanSpec,
                    figure_preset, run_scan, write_result)
from .validate import run_validation


def _parse_grid(text: str) -> tuple[int, ...]:
    parts = text.lower().split("x")
    try:
        dims = tuple(int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}; use N or N1xN2")
    if not 1 <= len(dims) <= 2 or any(d < 1 for d in dims):
        raise argparse.ArgumentTypeError(f"bad grid {text!r}; use N or N1xN2")
    return dims


def _parse_axis(text: str) -> tuple[str, float, float]:
    name, _, span = text.partition("=")
    lo, _, hi = span.partition(":")
    if name not in AXIS_PARAMETERS:
        raise argparse.ArgumentTypeError(
            f"unknown axis parameter {name!r}; choose from {AXIS_PARAMETERS}")
    try:
        return name, float(lo), float(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad axis {text!r}; use name=min:max")


def _add_common(parser: argparse.ArgumentParser, need_config: bool) -> None:
    parser.add_argument("--config", required=need_config,
                        help="path to a SystemConfig JSON file")
    parser.add_argument("--out", required=True, help="output path (.csv or .json)")
    parser.add_argument("--grid", type=_parse_grid, default=None,
                        help="grid resolution, N or N1xN2")
    parser.add_argument("--engine", choices=ENGINES, default="master")
    parser.add_argument("--threads", type=int, default=1,
                        help="parallel worker processes for grid evaluation")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modwave",
        description="photon-pair generation from modulated qubit arrays "
                    "coupled to a waveguide (frequencies in units of gamma_1D)")
    parser.add_argument("--version", action="version", version=f"modwave {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_spec = sub.add_parser("spectrum", help="emission spectrum over a frequency grid")
    _add_common(p_spec, need_config=True)
    p_spec.add_argument("--window", type=float, default=10.0,
                        help="spectrum window margin around the two resonances")

    p_scan = sub.add_parser("scan", help="observables over a 1-D or 2-D parameter grid")
    _add_common(p_scan, need_config=True)
    p_scan.add_argument("--axis1", type=_parse_axis, required=True,
                        metavar="NAME=MIN:MAX")
    p_scan.add_argument("--axis2", type=_parse_axis, default=None,
                        metavar="NAME=MIN:MAX")
    p_scan.add_argument("--observables", default="I_minus",
                        help=f"comma-separated subset of {','.join(OBSERVABLES)}")
    p_scan.add_argument("--total-cutoff", type=int, default=None,
                        help="optional total-excitation cutoff (speed option)")

    p_fig = sub.add_parser("figure", help="run a published-figure preset")
    p_fig.add_argument("figure_id", choices=FIGURE_IDS)
    _add_common(p_fig, need_config=False)

    p_val = sub.add_parser("validate", help="run the acceptance suite")
    p_val.add_argument("--level", choices=("quick", "full"), default="quick")
    p_val.add_argument("--out", default=None, help="optional JSON report path")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "validate":
        report = run_validation(args.level)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                json.dump(report, fh, indent=1)
                fh.write("\n")
        else:
            print(json.dumps(report, indent=1))
        return 0 if report["all_passed"] else 1

    if args.command == "figure":
        grid = args.grid
        if grid is not None and len(grid) == 1:
            grid = (grid[0], grid[0])
        base = SystemConfig.from_json(args.config) if args.config else None
        spec = figure_preset(args.figure_id, grid=grid, base=base)
        if args.engine != "master":
            spec = ScanSpec(base=spec.base, axis1=spec.axis1, axis2=spec.axis2,
                            observables=spec.observables, engine=args.engine,
                            per_mode_cutoff=spec.per_mode_cutoff,
                            total_cutoff=spec.total_cutoff, overlays=spec.overlays,
                            figure_id=spec.figure_id)
        result = run_scan(spec, threads=args.threads)
        write_result(result, args.out)
        print(f"wrote {args.out} ({result.provenance['timing_seconds']}s)")
        return 0

    config = SystemConfig.from_json(args.config)

    if args.command == "spectrum":
        n = args.grid[0] if args.grid else 201
        lo = config.omega0 - args.window
        hi = config.omega0 + max(config.anharmonicity, 0.0) + args.window
        spec = ScanSpec(base=config,
                        axis1=("omega_scan", tuple(np.linspace(lo, hi, n))),
                        axis2=None, observables=("spectrum",), engine=args.engine)
        result = run_scan(spec, threads=args.threads)
        write_result(result, args.out)
        print(f"wrote {args.out} ({result.provenance['timing_seconds']}s)")
        return 0

    if args.command == "scan":
        grid = args.grid or ((101, 101) if args.axis2 else (201,))
        if args.axis2 and len(grid) == 1:
            grid = (grid[0], grid[0])
        name1, lo1, hi1 = args.axis1
        axis1 = (name1, tuple(np.linspace(lo1, hi1, grid[0])))
        axis2 = None
        if args.axis2:
            name2, lo2, hi2 = args.axis2
            axis2 = (name2, tuple(np.linspace(lo2, hi2, grid[1])))
        observables = tuple(s.strip() for s in args.observables.split(",") if s.strip())
        spec = ScanSpec(base=config, axis1=axis1, axis2=axis2,
                        observables=observables, engine=args.engine,
                        total_cutoff=args.total_cutoff)
        result = run_scan(spec, threads=args.threads)
        write_result(result, args.out)
        print(f"wrote {args.out} ({result.provenance['timing_seconds']}s)")
        return 0

    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
