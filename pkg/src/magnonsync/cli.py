"""Command-line interface.

    magnonsync simulate --scenario <name> [--config <file>] [--out <dir>]
                        [--parallelism N] [--full-covariance] [--include-F]
    magnonsync sweep    --scenario <name> [--grid key=v1,v2,...] ...
                        [--config <file>] [--out <dir>] [--parallelism N]
                        [--full-covariance]

Exit codes: 0 success, 2 configuration error, 3 numerical divergence,
4 file I/O error.
"""

import argparse
import sys
import time
from dataclasses import replace
from pathlib import Path

from . import __version__
from .config import (ParseError, RangeError, UnknownKey, parse_config,
                     resolved_dict)
from .dynamics import ConfigInvalid, StepDiverged
from .experiments import run_scenario
from .output import IoError, write_manifest, write_summary

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DIVERGED = 3
EXIT_IO = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="magnonsync",
        description="Limit cycles and synchronization measures of two "
                    "cavity-coupled Kerr magnon modes.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", default=None,
                        help="preset name (limit-cycle, phase-locked, "
                             "sync-timeseries, thermal-sweep, custom)")
    common.add_argument("--config", default=None, metavar="FILE",
                        help="JSON configuration document")
    common.add_argument("--out", default=None, metavar="DIR",
                        help="output directory (created if missing)")
    common.add_argument("--parallelism", type=int, default=None, metavar="N",
                        help="worker processes for sweep points")
    common.add_argument("--full-covariance", action="store_true",
                        help="store all 21 covariance entries in the CSV")

    sim = sub.add_parser("simulate", parents=[common],
                         help="run a single scenario point")
    sim.add_argument("--include-F", dest="include_f", action="store_true",
                     help="track the inhomogeneous fluctuation drive "
                          "(diagnostic only)")

    swp = sub.add_parser("sweep", parents=[common],
                         help="run a grid of scenario points")
    swp.add_argument("--grid", action="append", default=[], metavar="KEY=V1,V2",
                     help="sweep grid, e.g. nbar_m=0,0.5,1,2,5 (repeatable)")
    return parser


def _parse_grid_args(grid_args) -> list[tuple[str, tuple]]:
    overrides = []
    for item in grid_args:
        key, sep, values = item.partition("=")
        if not sep or not key or not values:
            raise RangeError("grid", f"malformed --grid argument {item!r}")
        try:
            grid = tuple(float(v) for v in values.split(","))
        except ValueError as exc:
            raise RangeError(key, f"non-numeric grid value: {exc}") from exc
        overrides.append((key, grid))
    return overrides


def _load_config(args):
    text = ""
    if args.config is not None:
        try:
            text = Path(args.config).read_text(encoding="utf-8")
        except OSError as exc:
            raise IoError(args.config, exc) from exc
    spec, config = parse_config(text, scenario=args.scenario)
    if args.parallelism is not None:
        spec = replace(spec, parallelism=args.parallelism)
    return spec, config


def _write_output(args, spec, config, result, started):
    out_dir = Path(args.out)
    summary_path = out_dir / "summary.csv"
    write_summary(result.points, summary_path)
    manifest = {
        "version": __version__,
        "command": args.command,
        "resolved_config": resolved_dict(spec, config),
        "artifacts": {
            "summary": summary_path.name,
            "trajectories": [Path(p.traj_path).name for p in result.points
                             if p.traj_path],
        },
        "runtime_seconds": time.perf_counter() - started,
        "diagnostics": {
            "statuses": [p.status for p in result.points],
            "max_kerr_secular": max((p.max_kerr_secular for p in result.points
                                     if p.status == "ok"), default=None),
        },
    }
    write_manifest(out_dir, manifest)


def _report(result):
    for p in result.points:
        if p.status != "ok":
            print(f"point {p.index}: {p.status} ({p.error})")
            continue
        print(f"point {p.index}: phi_tail={p.phi_tail:.6f} "
              f"sbar_qphi={p.sbar_qphi:.6f} "
              f"epsc_tail_rms={p.epsc_tail_rms:.6g} "
              f"max_kerr_secular={p.max_kerr_secular:.3g}"
              + (f" overrides={p.overrides}" if p.overrides else ""))


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        spec, config = _load_config(args)
        if args.command == "simulate":
            if spec.overrides:
                raise ConfigInvalid(
                    "simulate runs a single point; use the sweep command "
                    "for grids")
            config = replace(config,
                             include_fluctuation_drive=args.include_f
                             or config.include_fluctuation_drive)
        else:
            cli_grids = _parse_grid_args(args.grid)
            if cli_grids:
                merged = dict(spec.overrides)
                merged.update(cli_grids)
                spec = replace(spec, overrides=tuple(merged.items()))

        if args.out is not None:
            try:
                Path(args.out).mkdir(parents=True, exist_ok=True)
            except OSError as exc:
                raise IoError(args.out, exc) from exc
        result = run_scenario(spec, base_config=config,
                              out_dir=args.out,
                              full_covariance=args.full_covariance)
        if args.out is not None:
            _write_output(args, spec, config, result, started)
        _report(result)
        if args.command == "simulate" and result.points[0].status != "ok":
            return EXIT_DIVERGED
    except (ParseError, UnknownKey, RangeError, ConfigInvalid) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except StepDiverged as exc:
        print(f"numerical divergence: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except IoError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
