"""Command line entry point.

Subcommands map one-to-one onto the run drivers in runs.py.  Exit codes:
0 success, 1 config error, 2 numerical failure (consistency check or
collapse fit), 3 I/O error.
"""

from __future__ import annotations

import argparse
import sys

from .config import ConfigError, load_config, parse_config
from .correlation import CollapseFitError
from .observables import NumericalConsistencyError
from .runs import (run_correlate, run_evolve, run_observables, run_powerlaw,
                   run_scan_flatten, run_timescales)

__all__ = ["main", "build_parser"]

_COMMANDS = {
    "evolve": run_evolve,
    "observables": run_observables,
    "correlate": run_correlate,
    "powerlaw": run_powerlaw,
    "scan-flatten": run_scan_flatten,
    "timescales": run_timescales,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wellpacket",
        description="Wave packet dynamics in a box: densities, expectation "
                    "values, correlation functions, and power-law well spectra.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("evolve", "write probability densities at listed times"),
        ("observables", "write <x>, dx, <p>, dp over a time schedule"),
        ("correlate", "write |C(t)| series and optional fit / revival scan"),
        ("powerlaw", "write WKB spectrum and time scales for power-law wells"),
        ("scan-flatten", "scan initial widths for the flattening time"),
        ("timescales", "write the closed-form time-scale report"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=False, default=None,
                       help="INI config file (defaults used when omitted)")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--format", choices=("csv", "json"), default=None,
                       help="override the [output] format")
        p.add_argument("--precision", type=int, default=None,
                       help="override the [output] significant digits")
        p.add_argument("--threads", type=int, default=1,
                       help="worker threads for long series (default 1)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.config is None:
            cfg = parse_config("")
        else:
            cfg = load_config(args.config)
        if args.precision is not None and not (1 <= args.precision <= 17):
            raise ConfigError("--precision must be in [1, 17]")
        if args.threads < 1:
            raise ConfigError("--threads must be >= 1")
        runner = _COMMANDS[args.command]
        files = runner(cfg, args.out, fmt=args.format,
                       precision=args.precision, threads=args.threads)
        for path in files:
            print(path)
        return 0
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 1
    except (NumericalConsistencyError, CollapseFitError) as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
