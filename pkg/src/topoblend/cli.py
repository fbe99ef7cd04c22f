"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 runtime error. The sweep
worker count comes from the TOPOBLEND_WORKERS environment variable.
"""
from __future__ import annotations

import argparse
import sys

from .app import SWEEP_AXES, cmd_export, cmd_run, cmd_sweep
from .config import benchmark_config, load_config
from .verify import CHECK_NAMES, run_checks


def _config_arg(value: str):
    if value == "benchmark":
        return benchmark_config()
    return load_config(value)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="topoblend",
        description="2D compliance topology optimization with blended density "
                    "filtering and phase-field perimeter regularization.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="optimize one configuration and write artifacts")
    p_run.add_argument("config", help="config file path, or 'benchmark' for the preset")
    p_run.add_argument("-o", "--output", default=None, help="output directory override")

    p_sweep = sub.add_parser("sweep", help="run a parameter sweep")
    p_sweep.add_argument("config", help="config file path, or 'benchmark'")
    p_sweep.add_argument("--axis", required=True, choices=SWEEP_AXES)
    p_sweep.add_argument("--values", required=True,
                         help="comma-separated values (mesh axis: e.g. 50x25,100x50)")
    p_sweep.add_argument("-o", "--output", default=None)

    p_verify = sub.add_parser("verify", help="run verification checks")
    p_verify.add_argument("config", help="config file path, or 'benchmark'")
    p_verify.add_argument("--check", action="append", default=None,
                          choices=CHECK_NAMES + ("all",),
                          help="check to run (repeatable; default all)")

    p_export = sub.add_parser("export", help="re-export artifacts of a finished run")
    p_export.add_argument("run_dir", help="directory written by 'run'")
    p_export.add_argument("--format", required=True, choices=("pgm", "vtk", "csv"))
    p_export.add_argument("--out", default=None, help="target path")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            cfg = _config_arg(args.config)
            result = cmd_run(cfg, args.output)
            final = result["final_J"]
            print(f"run finished: {len(result['history'])} iterations, "
                  f"J = {final}, artifacts in {result['paths']['metadata'].parent}")
            return 0
        if args.command == "sweep":
            cfg = _config_arg(args.config)
            values = [v for v in args.values.split(",") if v]
            result = cmd_sweep(cfg, args.axis, values, args.output)
            failed = [row for row in result["rows"] if row["status"] != "ok"]
            for row in result["rows"]:
                print(f"{args.axis} = {row['value']}: {row['status']}, J = {row['J']}")
            print(f"summary: {result['summary']}")
            return 2 if failed else 0
        if args.command == "verify":
            cfg = _config_arg(args.config)
            which = args.check if args.check else ["all"]
            results = run_checks(cfg, which)
            for res in results:
                print(f"[{'PASS' if res.passed else 'FAIL'}] {res.name}: {res.detail}")
            return 0 if all(res.passed for res in results) else 1
        if args.command == "export":
            target = cmd_export(args.run_dir, args.format, args.out)
            print(f"wrote {target}")
            return 0
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
