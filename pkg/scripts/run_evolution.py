#!/usr/bin/env python3
"""Reproduce the evolution analyses.

For each graph condition (regular degree 1, irregular degree 2) and
all five metrics: a mutation-rate sweep across ten rates, then ten
fixed-rate replicates at the default rate. Pass --jobs to parallelize
replicates; expect this to take a while on one core.
"""

import argparse
import sys

from tagmatch.cli import main


def run() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/evolution")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--sweep-replicates", type=int, default=3)
    args = ap.parse_args()

    tables = f"{args.out}/tables"
    rc = main(["normalize", "--out", tables, "--seed", str(args.seed)])
    if rc:
        return rc
    common = [
        "--seed", str(args.seed),
        "--tables", tables,
        "--out", args.out,
        "--jobs", str(args.jobs),
    ]
    for structure, degree in (("regular", "1"), ("irregular", "2")):
        shape = ["--structure", structure, "--degree", degree]
        rc = main([
            "evolve", *shape, *common,
            "--sweep", "--sweep-replicates", str(args.sweep_replicates),
        ])
        if rc:
            return rc
        rc = main(["evolve", *shape, *common])
        if rc:
            return rc
    return 0


if __name__ == "__main__":
    sys.exit(run())
