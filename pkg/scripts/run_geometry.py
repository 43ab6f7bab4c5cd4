#!/usr/bin/env python3
"""Reproduce the geometry analyses at full scale.

Builds normalization tables for all five metrics at width 32, then
samples similarity, dissimilarity, and detour statistics (5000 each).
Everything lands under --out; rerunning with the same seed rewrites
identical files.
"""

import argparse
import sys

from tagmatch.cli import main


def run() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/geometry")
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    tables = f"{args.out}/tables"
    common = ["--seed", str(args.seed)]
    rc = main(["normalize", "--out", tables, *common])
    if rc:
        return rc
    return main(["geometry", "--stat", "all", "--tables", tables, "--out", args.out, *common])


if __name__ == "__main__":
    sys.exit(run())
