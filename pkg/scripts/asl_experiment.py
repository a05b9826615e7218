#!/usr/bin/env python3
"""Straightening-law check, Krull dimension and degree for a linear-space family.

Either give a family file (header ``m n d_1 .. d_m`` followed by basis rows)
or ask for a random Veronese-type family with ``--veronese N M``.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from avlab.generic import krull_dim_degree, display_relations, straightening_relations, veronese_family
from avlab.groebner import Ideal
from avlab.lattice import asl_verify
from avlab.linear_spaces import LinearSpaceFamily


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    src = ap.add_mutually_exclusive_group(required=True)
    src.add_argument("--family", type=Path)
    src.add_argument("--veronese", nargs=2, type=int, metavar=("N", "M"))
    ap.add_argument("--orders", default="all", help="'all' or a number of sampled linear extensions")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--show-relations", action="store_true")
    args = ap.parse_args()

    if args.family:
        V = LinearSpaceFamily.parse(args.family.read_text())
    else:
        V = veronese_family(*args.veronese, seed=args.seed)
    res = straightening_relations(V)
    I = Ideal(res.ring, res.presentation)
    orders = args.orders if args.orders == "all" else int(args.orders)
    verdict = asl_verify(I, res.poset, orders, seed=args.seed)
    dd = krull_dim_degree(V, I)
    if args.show_relations:
        print("\n".join(display_relations(res)))
    print(f"asl: {'pass' if verdict.passed else 'FAIL'} ({verdict.mode}, "
          f"{verdict.extensions_tested}/{verdict.extension_count} extensions)")
    print(f"dim {dd.dim}, degree {dd.degree}, maximal chains {res.poset.maximal_chain_count()}")
    return 0 if verdict.passed else 1


if __name__ == "__main__":
    sys.exit(main())
