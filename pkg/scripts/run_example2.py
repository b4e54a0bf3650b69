#!/usr/bin/env python3
"""End-to-end run of the bundled example: validate, solve, analyze, plot.

Equivalent to chaining the CLI subcommands; kept as one script so a
single invocation reproduces every artifact (CSV table, iteration
report, level-set and band figures, analysis summary).

Usage:
    python scripts/run_example2.py [--out DIR] [--grid-density N] [--tol T]
"""

import argparse
import sys

from fuzzfrac.cli import main as cli


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out/example2")
    parser.add_argument("--grid-density", type=int, default=64)
    parser.add_argument("--tol", type=float, default=1e-8)
    args = parser.parse_args()

    common = [
        "--out", args.out,
        "--grid-density", str(args.grid_density),
        "--tol", str(args.tol),
    ]
    for command in ("validate", "solve", "plot", "analyze"):
        print(f"=== {command} ===")
        code = cli([command, *common])
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
