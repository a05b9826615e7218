#!/usr/bin/env python3
"""Structured {0,1} sweep plus random trials for one conjecture and size.

Example:
    python3 scripts/run_conjecture_sweep.py --id 4.2 --m 3 --n 2 --trials 200 --out runs/42_3x2.jsonl
"""
from __future__ import annotations

import argparse
import sys

from avlab.harness import RunConfig, report_summary, run_trials, structured_sweep, write_reports


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--id", dest="conjecture", choices=["1.1", "4.2"], required=True)
    ap.add_argument("--m", type=int, required=True)
    ap.add_argument("--n", type=int, required=True)
    ap.add_argument("--orders", type=int, default=24)
    ap.add_argument("--trials", type=int, default=100, help="random trials per source (0 to skip)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", required=True)
    args = ap.parse_args()

    cfg = RunConfig(args.conjecture, args.m, args.n, seed=args.seed, orders=args.orders, source="structured")
    reports, s = structured_sweep(cfg)
    write_reports(args.out, cfg, reports)
    print(f"structured: {s.patterns} patterns, {s.admissible} admissible, {s.classes} ideal classes "
          f"x {s.orders} orders ({s.coverage})", file=sys.stderr)
    if args.trials:
        for source in ("uniform-random", "sparse"):
            rc = RunConfig(args.conjecture, args.m, args.n, seed=args.seed, trials=args.trials,
                           orders=args.orders, source=source)
            write_reports(args.out, rc, run_trials(rc, workers=args.workers))
    summary = report_summary(args.out)
    print(summary.table())
    return 1 if summary.total("VIOLATION") else 0


if __name__ == "__main__":
    sys.exit(main())
