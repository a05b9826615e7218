"""Matrix term orders.

Every order is an integer weight matrix W followed by a lexicographic
tie-break on variable index (earlier variables are larger).  Monomial a is
greater than b iff ``(W a, a) > (W b, b)`` lexicographically, which covers
lex, degrevlex, block elimination orders, row-increasing weight orders and
revlex linear extensions of a poset with one representation.
"""
from __future__ import annotations

import random
from typing import Iterable, Sequence

from .ring import Monomial, RingContext


class TermOrder:
    def __init__(self, weights: Sequence[Sequence[int]], nvars: int, name: str = "matrix",
                 ring: RingContext | None = None):
        rows = tuple(tuple(int(w) for w in row) for row in weights)
        if any(len(r) != nvars for r in rows):
            raise ValueError("weight rows must have one entry per variable")
        for j in range(nvars):
            col = [r[j] for r in rows if r[j] != 0]
            if col and col[0] < 0:
                raise ValueError(f"variable {j} compares below 1: not a term order")
        self.weights = rows
        self.nvars = nvars
        self.name = name
        self.ring = ring
        self._cache: dict = {}

    def __repr__(self):
        return f"TermOrder({self.name}, {self.weights})"

    def __eq__(self, other):
        return isinstance(other, TermOrder) and (self.weights, self.nvars) == (other.weights, other.nvars)

    def __hash__(self):
        return hash((self.weights, self.nvars))

    def __getstate__(self):
        return {"weights": self.weights, "nvars": self.nvars, "name": self.name, "ring": self.ring}

    def __setstate__(self, state):
        self.__dict__.update(state)
        self._cache = {}

    def key(self, mono: Monomial) -> tuple:
        k = self._cache.get(mono)
        if k is None:
            if len(mono) != self.nvars:
                raise ValueError("monomial from a different context")
            k = tuple(sum(w * e for w, e in zip(row, mono)) for row in self.weights) + tuple(mono)
            self._cache[mono] = k
        return k

    def compare(self, a: Monomial, b: Monomial) -> int:
        """-1, 0 or 1 as a <, =, > b."""
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)

    def matrix(self) -> list[list[int]]:
        """Weight matrix with the tie-break rows appended (square and full rank)."""
        ident = [[int(i == j) for j in range(self.nvars)] for i in range(self.nvars)]
        return [list(r) for r in self.weights] + ident

    def restrict(self, keep: Sequence[int], ring: RingContext | None = None) -> "TermOrder":
        """The same order on the subring spanned by the variables at ``keep``."""
        rows = [[row[j] for j in keep] for row in self.weights]
        return TermOrder(rows, len(keep), self.name, ring)

    def to_json(self) -> dict:
        return {"name": self.name, "weights": [list(r) for r in self.weights], "nvars": self.nvars}

    @classmethod
    def from_json(cls, obj: dict, ring: RingContext | None = None) -> "TermOrder":
        return cls(obj["weights"], obj["nvars"], obj.get("name", "matrix"), ring)


def order_compare(order: TermOrder, a: Monomial, b: Monomial) -> str:
    c = order.compare(a, b)
    return {-1: "less", 0: "equal", 1: "greater"}[c]


def _perm(ring: RingContext, var_order: Iterable[str] | None) -> list[int]:
    if var_order is None:
        return list(range(ring.nvars))
    perm = [ring.index[v] for v in var_order]
    if sorted(perm) != list(range(ring.nvars)):
        raise ValueError("var_order must list every variable exactly once")
    return perm


def lex(ring: RingContext, var_order: Iterable[str] | None = None) -> TermOrder:
    """Lex with ``var_order[0] > var_order[1] > ...`` (default: ring order)."""
    perm = _perm(ring, var_order)
    rows = []
    for v in perm:
        row = [0] * ring.nvars
        row[v] = 1
        rows.append(row)
    return TermOrder(rows, ring.nvars, "lex", ring)


def degrevlex(ring: RingContext, var_order: Iterable[str] | None = None) -> TermOrder:
    """Degree reverse lex with ``var_order[0] > var_order[1] > ...``."""
    perm = _perm(ring, var_order)
    rows = [[1] * ring.nvars]
    for v in reversed(perm[1:]):
        row = [0] * ring.nvars
        row[v] = -1
        rows.append(row)
    return TermOrder(rows, ring.nvars, "degrevlex", ring)


def weight_order(ring: RingContext, weights: Sequence[Sequence[int]], name: str = "weight") -> TermOrder:
    return TermOrder(weights, ring.nvars, name, ring)


def elimination(ring: RingContext, eliminate: Iterable[str], base: TermOrder | None = None) -> TermOrder:
    """Block order: any monomial involving ``eliminate`` beats every monomial free of it."""
    elim = {ring.index[v] for v in eliminate}
    block = [1 if j in elim else 0 for j in range(ring.nvars)]
    if base is None:
        base = degrevlex(ring)
    return TermOrder([block] + [list(r) for r in base.weights], ring.nvars, f"elim+{base.name}", ring)


def row_increasing(ring: RingContext, rng: random.Random | None = None, spread: int = 100) -> TermOrder:
    """Random weight order on K[t_ij] with t_{i,j+1} > t_{i,j} in every row.

    Weights are strictly increasing along each row (by column label) and
    otherwise random.
    """
    rng = rng or random.Random(0)
    w = [0] * ring.nvars
    rows: dict[int, list[tuple[int, int]]] = {}
    for idx, v in enumerate(ring.variables):
        rows.setdefault(v.row, []).append((v.indices[-1], idx))
    for entries in rows.values():
        entries.sort()
        vals = sorted(rng.sample(range(1, spread * len(entries) + 1), len(entries)))
        for (_, idx), val in zip(entries, vals):
            w[idx] = val
    second = [rng.randint(0, spread) for _ in range(ring.nvars)]
    return TermOrder([w, second], ring.nvars, "row-increasing", ring)


def random_weight_order(ring: RingContext, rng: random.Random, bound: int = 10_000, rows: int = 2) -> TermOrder:
    """Random weight matrix with positive first row and entries <= bound, lex tie-break."""
    first = [rng.randint(1, bound) for _ in range(ring.nvars)]
    rest = [[rng.randint(0, bound) for _ in range(ring.nvars)] for _ in range(rows - 1)]
    return TermOrder([first] + rest, ring.nvars, "random-weight", ring)


def revlex_extension_order(ring: RingContext, extension: Sequence[str]) -> TermOrder:
    """Degree revlex on K[H] whose variable order is a given linear extension.

    ``extension`` lists variables from smallest to largest.
    """
    return degrevlex(ring, list(reversed(list(extension))))


def is_row_increasing(order: TermOrder, ring: RingContext) -> bool:
    rows: dict[int, list[tuple[int, int]]] = {}
    for idx, v in enumerate(ring.variables):
        if v.row is None:
            return False
        rows.setdefault(v.row, []).append((v.indices[-1], idx))
    for entries in rows.values():
        entries.sort()
        for (_, a), (_, b) in zip(entries, entries[1:]):
            ea = tuple(int(k == a) for k in range(ring.nvars))
            eb = tuple(int(k == b) for k in range(ring.nvars))
            if order.compare(eb, ea) <= 0:
                return False
    return True
