"""Discrete polymatroid bases, transversal polymatroids and their base rings."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

from .field import FieldConfig
from .groebner import Budget, Ideal, algebra_map_kernel, ideal_equal
from .lattice import PointPoset, hibi_relations
from .ring import Polynomial, RingContext, var_name

Vector = tuple  # tuple[int, ...]


class NotABase(ValueError):
    pass


@dataclass(frozen=True)
class SetSystem:
    """C_1, ..., C_m: non-empty subsets of {1..n}."""

    sets: tuple[tuple[int, ...], ...]
    n: int

    def __post_init__(self):
        for C in self.sets:
            if not C:
                raise ValueError("every C_i must be non-empty")
            if any(j < 1 or j > self.n for j in C):
                raise ValueError(f"{C} not inside 1..{self.n}")

    @classmethod
    def of(cls, sets: Iterable[Iterable[int]], n: int | None = None) -> "SetSystem":
        sets = tuple(tuple(sorted(set(C))) for C in sets)
        if n is None:
            n = max(max(C) for C in sets)
        return cls(sets, n)

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "SetSystem":
        rows = [line.split("#", 1)[0].split() for line in text.splitlines()]
        return cls.of([[int(v) for v in r] for r in rows if r], n)

    @property
    def m(self) -> int:
        return len(self.sets)

    def dump(self) -> str:
        return "\n".join(" ".join(str(j) for j in C) for C in self.sets)


def is_base(B: Iterable[Sequence[int]]) -> bool:
    """Equal coordinate sums plus the one-sided exchange axiom for all (v, w, i)."""
    B = [tuple(v) for v in B]
    if not B:
        raise ValueError("empty vector set")
    n = len(B[0])
    if any(len(v) != n for v in B):
        raise ValueError("ragged vector lengths")
    Bs = set(B)
    if len({sum(v) for v in Bs}) != 1:
        return False
    for v in Bs:
        for w in Bs:
            for i in range(n):
                if v[i] > w[i]:
                    ok = False
                    for j in range(n):
                        if v[j] < w[j]:
                            u = list(v)
                            u[i] -= 1
                            u[j] += 1
                            if tuple(u) in Bs:
                                ok = True
                                break
                    if not ok:
                        return False
    return True


def transversal_base(C: SetSystem) -> list[Vector]:
    """All sums e_{j1} + ... + e_{jm} with j_k in C_k, deduplicated and sorted."""
    out = set()
    for js in product(*C.sets):
        v = [0] * C.n
        for j in js:
            v[j - 1] += 1
        out.add(tuple(v))
    return sorted(out, reverse=True)


def base_ring(B: Sequence[Vector], field: FieldConfig | None = None) -> RingContext:
    return RingContext([var_name("b", *v) for v in B], field)


def monomial_images(B: Sequence[Vector], field: FieldConfig | None = None) -> list[Polynomial]:
    R = RingContext.x_ring(len(B[0]), field)
    return [R.monomial(v) for v in B]


def base_ring_kernel(B: Sequence[Vector], field: FieldConfig | None = None,
                     budget: Budget | None = None) -> Ideal:
    """Toric ideal of K[B]: kernel of b_v -> x^v."""
    B = [tuple(v) for v in B]
    return algebra_map_kernel(base_ring(B, field), monomial_images(B, field), budget)


def permutation_classes(points: Iterable[Sequence[int]]) -> dict[tuple, list[tuple]]:
    """Group points by their sorted multiset of coordinates."""
    classes: dict[tuple, list[tuple]] = {}
    for a in points:
        classes.setdefault(tuple(sorted(a)), []).append(tuple(a))
    return classes


def pseudo_white_presentation(C: SetSystem, field: FieldConfig | None = None) -> Ideal:
    """Hibi relations of C1 x ... x Cm plus s_a - s_b for coordinate-permuted pairs.

    Each permutation class contributes s_a - s_rep from every member to one
    representative (its lexicographically largest member).
    """
    H = PointPoset.boxes(C.sets)
    ring = H.ring(field)
    gens = hibi_relations(H, ring)
    for members in permutation_classes(H.points).values():
        if len(members) < 2:
            continue
        members = sorted(members)
        rep = members[-1]
        for a in members[:-1]:
            gens.append(ring.var(var_name("s", *a)) - ring.var(var_name("s", *rep)))
    return Ideal(ring, gens)


def transversal_av_kernel(C: SetSystem, field: FieldConfig | None = None,
                          budget: Budget | None = None) -> Ideal:
    """Kernel of K[C] -> R, s_a -> x_{a1} ... x_{am}, by elimination."""
    H = PointPoset.boxes(C.sets)
    ring = H.ring(field)
    X = RingContext.x_ring(C.n, field)
    images = []
    for a in H.points:
        e = [0] * C.n
        for j in a:
            e[j - 1] += 1
        images.append(X.monomial(e))
    return algebra_map_kernel(ring, images, budget)


def check_pseudo_white(C: SetSystem, field: FieldConfig | None = None) -> bool:
    return ideal_equal(pseudo_white_presentation(C, field), transversal_av_kernel(C, field))


def symmetric_exchange_quadrics(B: Sequence[Vector], field: FieldConfig | None = None) -> Ideal:
    """b_v b_w - b_{v-e_i+e_j} b_{w+e_i-e_j} over all valid exchanges."""
    B = [tuple(v) for v in B]
    if not is_base(B):
        raise NotABase("input is not a polymatroid base")
    ring = base_ring(B, field)
    Bs = set(B)
    n = len(B[0])
    gens: list[Polynomial] = []
    seen = set()
    b = lambda v: ring.var(var_name("b", *v))
    for v in B:
        for w in B:
            if v >= w:
                continue
            for i in range(n):
                for j in range(n):
                    if i == j or v[i] == 0 or w[j] == 0:
                        continue
                    v2 = list(v)
                    w2 = list(w)
                    v2[i] -= 1
                    v2[j] += 1
                    w2[i] += 1
                    w2[j] -= 1
                    v2, w2 = tuple(v2), tuple(w2)
                    if v2 not in Bs or w2 not in Bs:
                        continue
                    if {v2, w2} == {v, w}:
                        continue
                    key = frozenset([frozenset([v, w]), frozenset([v2, w2])])
                    if key in seen:
                        continue
                    seen.add(key)
                    gens.append(b(v) * b(w) - b(v2) * b(w2))
    return Ideal(ring, gens)


def white_check(B: Sequence[Vector], field: FieldConfig | None = None,
                budget: Budget | None = None) -> str:
    """Per-instance experiment: 'holds', 'fails' or 'budget-exceeded'."""
    from .groebner import BudgetExceeded
    try:
        quad = symmetric_exchange_quadrics(B, field)
        ker = base_ring_kernel(B, field, budget)
        return "holds" if ideal_equal(quad, ker, budget=budget) else "fails"
    except BudgetExceeded:
        return "budget-exceeded"
