#!/usr/bin/env python3
"""Check that generic 2x2-minor-type ideals have the combinatorial initial ideal.

Prints one line per (m, n) with certified and flagged trial counts.
"""
from __future__ import annotations

import argparse
import sys

from avlab.generic import verify_generic_initial


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="2x2,2x3,3x2,3x3,2x4", help="comma-separated MxN list")
    ap.add_argument("--orders", type=int, default=25)
    ap.add_argument("--trials", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    ok = True
    for item in args.sizes.split(","):
        m, n = map(int, item.lower().split("x"))
        v = verify_generic_initial(m, n, seed=args.seed, orders=args.orders, trials=args.trials)
        ok &= v.passed
        print(f"{m}x{n}: {v.certified}/{v.trials} certified, {v.flagged} flagged, "
              f"{v.mismatching_orders} mismatching orders")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
