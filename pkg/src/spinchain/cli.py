"""Command-line entry point: resonances, evolve, and sweep subcommands.

Exit codes: 0 success, 1 configuration error, 2 numerical assertion failure.
"""
from __future__ import annotations

import argparse
import dataclasses
import sys
import time
from pathlib import Path

from .experiments import (ConfigError, load_config, resonance_table,
                          run_evolution, run_sweep, write_evolution_files,
                          write_sweep_file)
from .integrator import NormDriftError, OracleError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinchain",
        description="Ising spin-chain RF pulse simulator")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, doc in [("resonances", "tabulate eigenenergies and transition frequencies"),
                      ("evolve", "integrate the pulse sequence and write time series"),
                      ("sweep", "fidelity versus the J'/J coupling ratio")]:
        cmd = sub.add_parser(name, help=doc)
        cmd.add_argument("--config", type=Path, default=None,
                         help="config file (defaults to the built-in parameter set)")
        cmd.add_argument("--set", dest="overrides", action="append", default=[],
                         metavar="KEY=VALUE", help="override a config key (repeatable)")
        cmd.add_argument("--out", type=Path, default=Path("out"),
                         help="output directory")
        cmd.add_argument("--jobs", type=int, default=1,
                         help="worker processes for sweeps")
        cmd.add_argument("--strict-norm", action="store_true",
                         help="treat norm drift beyond 1e-6 as a hard failure")
        cmd.add_argument("--phase", type=float, default=None,
                         help="override the second pulse's phase (radians)")
    return parser


def _apply_phase(config, phase: float):
    if phase is None:
        return config
    if len(config.pulses) < 2:
        raise ConfigError("--phase needs a sequence with at least two pulses")
    pulses = list(config.pulses)
    pulses[1] = dataclasses.replace(pulses[1], phase=phase)
    return dataclasses.replace(config, pulses=pulses)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _apply_phase(load_config(args.config, args.overrides), args.phase)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1

    try:
        if args.command == "resonances":
            table = resonance_table(config)
            args.out.mkdir(parents=True, exist_ok=True)
            (args.out / "resonances.txt").write_text(table)
            print(table, end="")
        elif args.command == "evolve":
            t0 = time.perf_counter()
            traj = run_evolution(config, strict=args.strict_norm)
            summary = write_evolution_files(config, traj, args.out)
            elapsed = time.perf_counter() - t0
            print(f"integrated to t={summary['final_time_us']:.6g} us "
                  f"in {elapsed:.2f} s; max norm error "
                  f"{summary['max_norm_error']:.3e}; files in {args.out}/")
            if summary["fidelity"] is not None:
                print(f"fidelity vs (|000>-|101>)/sqrt2: "
                      f"|F| = {abs(summary['fidelity']):.6f}")
        elif args.command == "sweep":
            t0 = time.perf_counter()
            rows = run_sweep(config, jobs=max(1, args.jobs),
                             strict=args.strict_norm)
            path = write_sweep_file(config, rows, args.out)
            elapsed = time.perf_counter() - t0
            print(f"{len(rows)} sweep points in {elapsed:.2f} s -> {path}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (NormDriftError, OracleError) as exc:
        print(f"numerical assertion failure: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
