#!/usr/bin/env python3
"""Reproduce the variation analyses at full scale.

Single-step perturbations in both regimes (5000 samples each), then
1000-walk ensembles from both start modes, for all five metrics at
width 32.
"""

import argparse
import sys

from tagmatch.cli import main


def run() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/variation")
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    tables = f"{args.out}/tables"
    common = ["--seed", str(args.seed), "--tables", tables, "--out", args.out]
    rc = main(["normalize", "--out", tables, "--seed", str(args.seed)])
    if rc:
        return rc
    rc = main(["variation", "--mode", "steps", "--regime", "all", *common])
    if rc:
        return rc
    for start in ("identical", "sampled-close"):
        rc = main(["variation", "--mode", "walks", "--start", start, *common])
        if rc:
            return rc
    return 0


if __name__ == "__main__":
    sys.exit(run())
