"""Finite posets of integer points under the componentwise order.

Covers the product lattice H(d) = {1..d1} x ... x {1..dm}, its rank truncation
H_n(d) = {a in H(d) : rank(a) < n} with rank(a) = sum(a) - m, Hibi relations,
linear extensions, chain counts and the revlex-Groebner test for algebras
with straightening laws.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Iterator, Sequence

from .field import FieldConfig
from .groebner import Budget, Ideal, MonomialIdeal, buchberger
from .orders import TermOrder, revlex_extension_order
from .ring import Polynomial, RingContext, var_name

Point = tuple  # tuple[int, ...]

EXHAUSTIVE_LIMIT = 500
DEFAULT_SAMPLES = 50


class NotALattice(ValueError):
    pass


class NotALinearExtension(ValueError):
    pass


def leq(a: Point, b: Point) -> bool:
    return all(x <= y for x, y in zip(a, b))


def join_meet(a: Point, b: Point) -> tuple[Point, Point]:
    if len(a) != len(b):
        raise ValueError("points of different length")
    return (tuple(max(x, y) for x, y in zip(a, b)),
            tuple(min(x, y) for x, y in zip(a, b)))


def rank(a: Point) -> int:
    return sum(a) - len(a)


class PointPoset:
    """A finite set of integer vectors ordered componentwise."""

    def __init__(self, points: Iterable[Sequence[int]], name: str = "poset"):
        self.points: tuple[Point, ...] = tuple(sorted(set(tuple(p) for p in points)))
        if len({len(p) for p in self.points}) > 1:
            raise ValueError("points of different length")
        self.pointset = frozenset(self.points)
        self.name = name
        self.index = {p: i for i, p in enumerate(self.points)}

    @classmethod
    def product(cls, d: Sequence[int]) -> "PointPoset":
        """H(d)."""
        return cls(product(*(range(1, k + 1) for k in d)), f"H{tuple(d)}")

    @classmethod
    def boxes(cls, sets: Sequence[Iterable[int]]) -> "PointPoset":
        """C1 x ... x Cm for arbitrary integer label sets."""
        return cls(product(*(sorted(s) for s in sets)), "C")

    @classmethod
    def truncated(cls, d: Sequence[int], n: int) -> "PointPoset":
        """H_n(d)."""
        pts = [a for a in product(*(range(1, k + 1) for k in d)) if rank(a) < n]
        return cls(pts, f"H_{n}{tuple(d)}")

    @classmethod
    def chain(cls, k: int) -> "PointPoset":
        return cls([(i,) for i in range(1, k + 1)], f"chain{k}")

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, p):
        return tuple(p) in self.pointset

    def __repr__(self):
        return f"PointPoset({self.name}, {len(self)} points)"

    def less(self, a: Point, b: Point) -> bool:
        return a != b and leq(a, b)

    def comparable(self, a: Point, b: Point) -> bool:
        return leq(a, b) or leq(b, a)

    def is_lattice(self) -> bool:
        for a, b in combinations(self.points, 2):
            j, m = join_meet(a, b)
            if j not in self.pointset or m not in self.pointset:
                return False
        return True

    def is_down_closed_in(self, ambient: "PointPoset") -> bool:
        return all(q in self.pointset for p in self.points for q in ambient.points if leq(q, p))

    def covers(self) -> list[tuple[Point, Point]]:
        """Cover relations (a, b): a < b with nothing strictly between."""
        out = []
        for a in self.points:
            ups = [b for b in self.points if self.less(a, b)]
            for b in ups:
                if not any(self.less(a, c) and self.less(c, b) for c in ups):
                    out.append((a, b))
        return out

    def minimal_elements(self) -> list[Point]:
        return [a for a in self.points if not any(self.less(b, a) for b in self.points)]

    def maximal_elements(self) -> list[Point]:
        return [a for a in self.points if not any(self.less(a, b) for b in self.points)]

    def incomparable_pairs(self) -> list[tuple[Point, Point]]:
        return [(a, b) for a, b in combinations(self.points, 2) if not self.comparable(a, b)]

    def edge_list(self) -> str:
        """Cover relations as lines ``s[a] s[b]``."""
        return "\n".join(f"{var_name('s', *a)} {var_name('s', *b)}" for a, b in self.covers())

    # rings ------------------------------------------------------------------

    def ring(self, field: FieldConfig | None = None, family: str = "s") -> RingContext:
        return RingContext.s_ring(self.points, field, family)

    def variable(self, a: Point, family: str = "s") -> str:
        return var_name(family, *a)

    # chains -----------------------------------------------------------------

    def maximal_chain_count(self) -> int:
        """Number of maximal chains, i.e. saturated chains from a minimal to a maximal element."""
        up: dict[Point, list[Point]] = {a: [] for a in self.points}
        for a, b in self.covers():
            up[a].append(b)

        @lru_cache(maxsize=None)
        def count(a):
            if not up[a]:
                return 1
            return sum(count(b) for b in up[a])

        return sum(count(a) for a in self.minimal_elements())

    def maximal_chains(self) -> list[list[Point]]:
        up: dict[Point, list[Point]] = {a: [] for a in self.points}
        for a, b in self.covers():
            up[a].append(b)
        out = []

        def walk(path):
            nxt = up[path[-1]]
            if not nxt:
                out.append(list(path))
            for b in nxt:
                walk(path + [b])

        for a in self.minimal_elements():
            walk([a])
        return out

    # linear extensions ------------------------------------------------------

    def _below(self) -> list[int]:
        """Bitmask of strictly smaller elements, per element index."""
        masks = []
        for b in self.points:
            m = 0
            for i, a in enumerate(self.points):
                if self.less(a, b):
                    m |= 1 << i
            masks.append(m)
        return masks

    def _completions(self):
        below = self._below()
        full = (1 << len(self.points)) - 1

        @lru_cache(maxsize=None)
        def count(placed: int) -> int:
            if placed == full:
                return 1
            total = 0
            for i in range(len(below)):
                if not placed >> i & 1 and below[i] & ~placed == 0:
                    total += count(placed | 1 << i)
            return total

        return below, count

    def linear_extension_count(self) -> int:
        _, count = self._completions()
        return count(0)

    def linear_extensions(self) -> Iterator[list[Point]]:
        """All linear extensions, listed smallest element first."""
        below = self._below()
        n = len(below)

        def rec(placed, acc):
            if len(acc) == n:
                yield [self.points[i] for i in acc]
                return
            for i in range(n):
                if not placed >> i & 1 and below[i] & ~placed == 0:
                    acc.append(i)
                    yield from rec(placed | 1 << i, acc)
                    acc.pop()

        yield from rec(0, [])

    def random_linear_extension(self, rng: random.Random) -> list[Point]:
        """Uniformly random linear extension (weights from exact completion counts)."""
        below, count = self._completions()
        placed = 0
        acc = []
        for _ in range(len(below)):
            opts = [i for i in range(len(below)) if not placed >> i & 1 and below[i] & ~placed == 0]
            weights = [count(placed | 1 << i) for i in opts]
            i = rng.choices(opts, weights=weights)[0]
            acc.append(i)
            placed |= 1 << i
        return [self.points[i] for i in acc]

    def is_linear_extension(self, ext: Sequence[Point]) -> bool:
        ext = [tuple(p) for p in ext]
        if sorted(ext) != list(self.points):
            return False
        pos = {p: i for i, p in enumerate(ext)}
        return all(pos[a] < pos[b] for a in self.points for b in self.points if self.less(a, b))


def truncated_lattice(d: Sequence[int], n: int) -> PointPoset:
    return PointPoset.truncated(d, n)


def incomparable_pairs(H: PointPoset) -> list[tuple[Point, Point]]:
    return H.incomparable_pairs()


def maximal_chain_count(H: PointPoset) -> int:
    return H.maximal_chain_count()


def hibi_relations(H: PointPoset, ring: RingContext | None = None) -> list[Polynomial]:
    """s_a s_b - s_{a v b} s_{a ^ b}, one per incomparable pair of a lattice H."""
    ring = ring or H.ring()
    out = []
    for a, b in H.incomparable_pairs():
        j, m = join_meet(a, b)
        if j not in H or m not in H:
            raise NotALattice(f"join/meet of {a}, {b} leaves the point set")
        s = lambda p: ring.var(var_name("s", *p))
        out.append(s(a) * s(b) - s(j) * s(m))
    return out


def incomparable_ideal(H: PointPoset, ring: RingContext | None = None) -> MonomialIdeal:
    """J_H: products of incomparable pairs."""
    ring = ring or H.ring()
    gens = []
    for a, b in H.incomparable_pairs():
        e = [0] * ring.nvars
        e[ring.index[var_name("s", *a)]] += 1
        e[ring.index[var_name("s", *b)]] += 1
        gens.append(tuple(e))
    return MonomialIdeal(ring, gens)


def revlex_extension(H: PointPoset, extension: Sequence[Point], ring: RingContext | None = None) -> TermOrder:
    """Revlex term order on K[s_a : a in H] inducing the linear extension (smallest first)."""
    if not H.is_linear_extension(extension):
        raise NotALinearExtension(f"{list(extension)} is not a linear extension of {H}")
    ring = ring or H.ring()
    return revlex_extension_order(ring, [var_name("s", *p) for p in extension])


@dataclass
class StraighteningRelation:
    """x*y - sum(coeff * z*t) for an incomparable pair (x, y)."""

    left: tuple[Point, Point]
    right: list[tuple[object, tuple[Point, Point]]]

    def asl2_shape(self, H: PointPoset) -> bool:
        x, y = self.left
        for _, (z, t) in self.right:
            if not (leq(z, t) and H.less(z, x) and H.less(z, y)):
                return False
        return True

    def to_polynomial(self, ring: RingContext) -> Polynomial:
        s = lambda p: ring.var(var_name("s", *p))
        f = s(self.left[0]) * s(self.left[1])
        for c, (z, t) in self.right:
            f = f - (s(z) * s(t)).scale(c)
        return f


def relation_from_polynomial(f: Polynomial, lead, H: PointPoset) -> StraighteningRelation:
    """Read a monic quadric with leading monomial ``lead`` as a straightening relation."""
    ring = f.ring
    pts = {ring.index[var_name("s", *p)]: p for p in H.points}

    def pair(mono):
        idx = [i for i, k in enumerate(mono) for _ in range(k)]
        if len(idx) != 2:
            raise ValueError(f"non-quadratic term {ring.monomial_str(mono)}")
        a, b = sorted((pts[idx[0]], pts[idx[1]]))
        if leq(b, a):
            a, b = b, a
        return a, b

    fld = ring.field
    right = [(fld.neg(c), pair(m)) for m, c in f.terms.items() if m != lead]
    right.sort(key=lambda t: t[1])
    return StraighteningRelation(pair(lead), right)


@dataclass
class ASLVerdict:
    passed: bool
    mode: str  # "exhaustive" or "sampled"
    extensions_tested: int
    extension_count: int
    failing_extension: list | None = None
    reason: str = ""
    relations: list[StraighteningRelation] = field(default_factory=list)


def asl_verify(I: Ideal, H: PointPoset, budget: str | int = "all", seed: int = 0,
               gb_budget: Budget | None = None, limit: int = EXHAUSTIVE_LIMIT) -> ASLVerdict:
    """Check in_tau(I) = J_H for revlex linear extensions tau, then the ASL2 shape.

    ``budget="all"`` enumerates every extension when there are at most
    ``limit`` of them and otherwise samples ``DEFAULT_SAMPLES`` uniformly; an
    integer budget always samples that many.
    """
    ring = I.ring
    if set(ring.names) != {var_name("s", *p) for p in H.points}:
        raise ValueError("ring variables must be exactly the s_a for a in H")
    total = H.linear_extension_count()
    rng = random.Random(seed)
    if budget == "all" and total <= limit:
        mode = "exhaustive"
        exts = list(H.linear_extensions())
    else:
        mode = "sampled"
        k = DEFAULT_SAMPLES if budget == "all" else int(budget)
        exts = [H.random_linear_extension(rng) for _ in range(k)]
    target = incomparable_ideal(H, ring)
    relations: list[StraighteningRelation] = []
    for n_done, ext in enumerate(exts, 1):
        order = revlex_extension(H, ext, ring)
        if I.is_zero():
            ini = MonomialIdeal(ring, [])
            gb = None
        else:
            gb = buchberger(I, order, gb_budget)
            ini = gb.initial_ideal()
        if ini != target:
            return ASLVerdict(False, mode, n_done, total, ext, f"in(I) = {ini} differs from J_H")
        rels = []
        for g in (gb.elements if gb is not None else []):
            lead = g.leading_monomial(order)
            rel = relation_from_polynomial(g, lead, H)
            if not rel.asl2_shape(H):
                return ASLVerdict(False, mode, n_done, total, ext, f"relation {g} violates ASL2 shape")
            rels.append(rel)
        if not relations:
            relations = rels
    return ASLVerdict(True, mode, len(exts), total, None, "", relations)


def standard_monomial_count(H: PointPoset, degree: int) -> int:
    """Number of chain-supported monomials (multichains) of a given degree."""
    pts = H.points

    @lru_cache(maxsize=None)
    def count(start_idx: int, left: int) -> int:
        if left == 0:
            return 1
        total = 0
        for j in range(len(pts)):
            if start_idx < 0 or leq(pts[start_idx], pts[j]):
                total += count(j, left - 1)
        return total

    return count(-1, degree)
