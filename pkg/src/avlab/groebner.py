"""Buchberger's algorithm and the ideal operations built on it.

The engine works on sparse exponent-tuple dictionaries.  Pairs are pruned
with the Gebauer-Moeller installation of Buchberger's product and chain
criteria and selected by sugar degree (which is the normal strategy on
homogeneous input).  Resource caps raise :class:`BudgetExceeded`; a basis is
never returned truncated.
"""
from __future__ import annotations

import contextlib
import contextvars
import heapq
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .orders import TermOrder, degrevlex, elimination
from .ring import (Monomial, Polynomial, RingContext, Variable, mono_divides, mono_lcm)


class BudgetExceeded(RuntimeError):
    """Buchberger stopped at a configured resource cap."""


class GroebnerValidationError(AssertionError):
    """A post-hoc S-pair check found a non-reducing pair (engine bug)."""


@dataclass(frozen=True)
class Budget:
    max_pairs: int = 250_000
    max_polys: int = 20_000

    @classmethod
    def parse(cls, text: str) -> "Budget":
        kw = {}
        for part in text.split(","):
            k, _, v = part.partition("=")
            k = k.strip()
            if k == "pairs":
                kw["max_pairs"] = int(v)
            elif k == "polys":
                kw["max_polys"] = int(v)
            else:
                raise ValueError(f"unknown budget key {k!r}")
        return cls(**kw)


@dataclass
class ValidationStats:
    bases_checked: int = 0
    pairs_checked: int = 0


_VALIDATION: contextvars.ContextVar[ValidationStats | None] = contextvars.ContextVar(
    "avlab_groebner_validation", default=None)


@contextlib.contextmanager
def validating():
    """Within this block every computed basis is re-checked by full S-pair reduction."""
    stats = ValidationStats()
    token = _VALIDATION.set(stats)
    try:
        yield stats
    finally:
        _VALIDATION.reset(token)


# --------------------------------------------------------------------------
# low-level machinery

class _Elem:
    """A monic basis element: leading monomial, support bitmask, tail terms."""

    __slots__ = ("lm", "mask", "tail", "sugar", "poly")

    def __init__(self, lm, tail, sugar, poly):
        self.lm = lm
        self.mask = _mask(lm)
        self.tail = tail
        self.sugar = sugar
        self.poly = poly


def _mask(mono) -> int:
    m = 0
    for i, e in enumerate(mono):
        if e:
            m |= 1 << i
    return m


class _Reducer:
    """Division of dictionaries of terms by a list of monic elements."""

    def __init__(self, ring: RingContext, order: TermOrder):
        self.ring = ring
        self.order = order
        self.field = ring.field
        self.mod = ring.field.modulus
        self._neg: dict = {}

    def negkey(self, mono):
        k = self._neg.get(mono)
        if k is None:
            k = tuple(-x for x in self.order.key(mono))
            self._neg[mono] = k
        return k

    def find_divisor(self, mono, elems: Sequence[_Elem]):
        mk = _mask(mono)
        for e in elems:
            if e.mask & ~mk:
                continue
            lm = e.lm
            for a, b in zip(lm, mono):
                if a > b:
                    break
            else:
                return e
        return None

    def reduce(self, terms: dict, elems: Sequence[_Elem], full: bool = True) -> dict:
        """Remainder of ``terms`` on division by ``elems`` (consumes ``terms``)."""
        mod = self.mod
        nvars = self.ring.nvars
        heap = [self.negkey(m) for m in terms]
        heapq.heapify(heap)
        present = set(terms)
        rem: dict = {}
        while heap:
            nk = heapq.heappop(heap)
            mono = tuple(-x for x in nk[-nvars:]) if nvars else ()
            present.discard(mono)
            c = terms.pop(mono, None)
            if c is None:
                continue
            e = self.find_divisor(mono, elems)
            if e is None:
                rem[mono] = c
                if not full:
                    # leading term is irreducible: copy the rest untouched
                    rem.update(terms)
                    return rem
                continue
            q = tuple(a - b for a, b in zip(mono, e.lm))
            for tm, tc in e.tail:
                m2 = tuple(a + b for a, b in zip(tm, q))
                old = terms.get(m2)
                if old is None:
                    v = -c * tc
                    if mod:
                        v %= mod
                    if v:
                        terms[m2] = v
                        if m2 not in present:
                            present.add(m2)
                            heapq.heappush(heap, self.negkey(m2))
                else:
                    v = old - c * tc
                    if mod:
                        v %= mod
                    if v:
                        terms[m2] = v
                    else:
                        del terms[m2]
        return rem

    def make_elem(self, terms: dict, sugar: int) -> _Elem:
        lm = max(terms, key=self.order.key)
        inv = self.field.inv(terms[lm])
        mod = self.mod
        if mod:
            monic = {m: c * inv % mod for m, c in terms.items()}
        else:
            monic = {m: c * inv for m, c in terms.items()}
        tail = sorted(((m, c) for m, c in monic.items() if m != lm),
                      key=lambda t: self.order.key(t[0]), reverse=True)
        return _Elem(lm, tail, sugar, Polynomial(self.ring, monic))

    def spoly(self, a: _Elem, b: _Elem, lcm) -> dict:
        mod = self.mod
        qa = tuple(x - y for x, y in zip(lcm, a.lm))
        qb = tuple(x - y for x, y in zip(lcm, b.lm))
        out: dict = {}
        for tm, tc in a.tail:
            m = tuple(x + y for x, y in zip(tm, qa))
            out[m] = out.get(m, 0) + tc
        for tm, tc in b.tail:
            m = tuple(x + y for x, y in zip(tm, qb))
            out[m] = out.get(m, 0) - tc
        if mod:
            return {m: c % mod for m, c in out.items() if c % mod}
        return {m: c for m, c in out.items() if c}


def _degree(mono, grading) -> int:
    if grading is None:
        return sum(mono)
    return sum(g * e for g, e in zip(grading, mono))


# --------------------------------------------------------------------------
# public types

class Ideal:
    def __init__(self, ring: RingContext, gens: Iterable[Polynomial | str] = ()):
        out = []
        for g in gens:
            if isinstance(g, str):
                g = ring.parse(g)
            if g.ring != ring:
                raise ValueError("generator from a different ring")
            if g:
                out.append(g)
        self.ring = ring
        self.gens: list[Polynomial] = out

    def __repr__(self):
        return f"Ideal({', '.join(str(g) for g in self.gens)})"

    def __iter__(self):
        return iter(self.gens)

    def __len__(self):
        return len(self.gens)

    def is_zero(self) -> bool:
        return not self.gens

    def groebner(self, order: TermOrder | None = None, budget: Budget | None = None) -> "GroebnerBasis":
        return buchberger(self, order if order is not None else degrevlex(self.ring), budget)

    def contains(self, f: Polynomial, order: TermOrder | None = None) -> bool:
        return self.groebner(order).contains(f)


class MonomialIdeal:
    """Monomial ideal held by its minimal generators (sorted, deterministic)."""

    def __init__(self, ring: RingContext, gens: Iterable[Monomial]):
        self.ring = ring
        self.gens: list[Monomial] = _minimal(gens)

    def __eq__(self, other):
        return isinstance(other, MonomialIdeal) and set(self.gens) == set(other.gens)

    def __hash__(self):
        return hash(frozenset(self.gens))

    def __repr__(self):
        return "MonomialIdeal(" + ", ".join(self.ring.monomial_str(g) for g in self.gens) + ")"

    def __len__(self):
        return len(self.gens)

    def contains(self, mono: Monomial) -> bool:
        return any(mono_divides(g, mono) for g in self.gens)

    def strings(self) -> list[str]:
        return [self.ring.monomial_str(g) for g in self.gens]


def _minimal(gens: Iterable[Monomial]) -> list[Monomial]:
    uniq = sorted(set(tuple(g) for g in gens), key=lambda g: (sum(g), tuple(-x for x in g)))
    out: list[Monomial] = []
    for g in uniq:
        if not any(mono_divides(h, g) for h in out):
            out.append(g)
    return sorted(out, reverse=True)


def minimalize(gens: Iterable[Monomial], ring: RingContext | None = None) -> MonomialIdeal | list:
    """Divisibility-minimal subset of monomials (as a MonomialIdeal when a ring is given)."""
    if ring is None:
        return _minimal(gens)
    return MonomialIdeal(ring, gens)


class GroebnerBasis:
    def __init__(self, ring: RingContext, elements: list[Polynomial], order: TermOrder,
                 reduced: bool, stats: dict | None = None):
        self.ring = ring
        self.order = order
        self.reduced = reduced
        self.elements = sorted(elements, key=lambda g: order.key(g.leading_monomial(order)), reverse=True)
        self.stats = stats or {}
        self._reducer = _Reducer(ring, order)
        self._elems = [self._reducer.make_elem(dict(g.terms), g.total_degree()) for g in self.elements]

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"GroebnerBasis({[g.to_str(self.order) for g in self.elements]})"

    def leading_monomials(self) -> list[Monomial]:
        return [e.lm for e in self._elems]

    def initial_ideal(self) -> MonomialIdeal:
        return MonomialIdeal(self.ring, self.leading_monomials())

    def normal_form(self, f: Polynomial) -> Polynomial:
        return Polynomial(self.ring, self._reducer.reduce(dict(f.terms), self._elems))

    def contains(self, f: Polynomial) -> bool:
        return not self._reducer.reduce(dict(f.terms), self._elems)

    def element_with_leading(self, mono: Monomial) -> Polynomial | None:
        for e in self._elems:
            if e.lm == mono:
                return e.poly
        return None

    def is_groebner(self) -> bool:
        return spairs_reduce_to_zero(self.elements, self.order)

    def ideal(self) -> Ideal:
        return Ideal(self.ring, self.elements)

    def key(self) -> frozenset:
        """Hashable identity of a reduced basis."""
        return frozenset(frozenset(g.terms.items()) for g in self.elements)


# --------------------------------------------------------------------------
# algorithms

def normal_form(f: Polynomial, G: GroebnerBasis | Sequence[Polynomial], order: TermOrder | None = None) -> Polynomial:
    """Remainder of f on division by G (a GroebnerBasis, or polynomials plus an order)."""
    if isinstance(G, GroebnerBasis):
        return G.normal_form(f)
    if order is None:
        raise ValueError("an order is required when dividing by a plain list")
    red = _Reducer(f.ring, order)
    elems = [red.make_elem(dict(g.terms), g.total_degree()) for g in G if g]
    return Polynomial(f.ring, red.reduce(dict(f.terms), elems))


def spairs_reduce_to_zero(polys: Sequence[Polynomial], order: TermOrder) -> bool:
    """Buchberger's criterion, checked on every pair with no pruning."""
    polys = [g for g in polys if g]
    if not polys:
        return True
    red = _Reducer(polys[0].ring, order)
    elems = [red.make_elem(dict(g.terms), g.total_degree()) for g in polys]
    for i in range(len(elems)):
        for j in range(i + 1, len(elems)):
            lcm = mono_lcm(elems[i].lm, elems[j].lm)
            s = red.spoly(elems[i], elems[j], lcm)
            if s and red.reduce(s, elems):
                return False
    return True


def buchberger(I: Ideal, order: TermOrder, budget: Budget | None = None,
               grading: Sequence[int] | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of I.

    ``grading`` (positive integer weights per variable) drives sugar-degree
    pair selection; it defaults to total degree.
    """
    budget = budget or Budget()
    ring = I.ring
    red = _Reducer(ring, order)
    key = order.key

    polys: list[_Elem] = []
    active: list[int] = []
    pairs: list = []  # heap of (sugar, lcm key, counter, i, j, lcm)
    counter = 0
    pairs_done = 0

    def update(h_idx: int):
        nonlocal counter
        h = polys[h_idx]
        lm_h = h.lm
        cands = []
        for g_idx in active:
            g = polys[g_idx]
            lcm = mono_lcm(lm_h, g.lm)
            coprime = all(a + b == c for a, b, c in zip(lm_h, g.lm, lcm))
            cands.append((g_idx, lcm, coprime))
        kept = []
        for pos, (g_idx, lcm, coprime) in enumerate(cands):
            if coprime:
                kept.append((g_idx, lcm, coprime))
                continue
            dominated = False
            for other in cands[pos + 1:]:
                if mono_divides(other[1], lcm):
                    dominated = True
                    break
            if not dominated:
                for other in kept:
                    if mono_divides(other[1], lcm):
                        dominated = True
                        break
            if not dominated:
                kept.append((g_idx, lcm, coprime))
        # chain criterion on old pairs
        if pairs:
            survivors = []
            for p in pairs:
                _, _, _, i, j, lcm = p
                if mono_divides(lm_h, lcm):
                    li = mono_lcm(polys[i].lm, lm_h)
                    lj = mono_lcm(polys[j].lm, lm_h)
                    if li != lcm and lj != lcm:
                        continue
                survivors.append(p)
            if len(survivors) != len(pairs):
                pairs[:] = survivors
                heapq.heapify(pairs)
        for g_idx, lcm, coprime in kept:
            if coprime:
                continue
            g = polys[g_idx]
            sugar = max(h.sugar + _degree(lcm, grading) - _degree(lm_h, grading),
                        g.sugar + _degree(lcm, grading) - _degree(g.lm, grading))
            counter += 1
            heapq.heappush(pairs, (sugar, key(lcm), counter, g_idx, h_idx, lcm))
        active[:] = [g for g in active if not mono_divides(lm_h, polys[g].lm)]
        active.append(h_idx)

    def add(terms: dict, sugar: int):
        if len(polys) >= budget.max_polys:
            raise BudgetExceeded(f"polynomial cap {budget.max_polys} reached")
        polys.append(red.make_elem(terms, sugar))
        update(len(polys) - 1)

    gens = sorted(I.gens, key=lambda g: (g.total_degree(), key(g.leading_monomial(order))))
    for g in gens:
        sug = max(_degree(m, grading) for m in g.terms)
        r = red.reduce(dict(g.terms), [polys[i] for i in active])
        if r:
            add(r, sug)

    while pairs:
        sugar, _, _, i, j, lcm = heapq.heappop(pairs)
        pairs_done += 1
        if pairs_done > budget.max_pairs:
            raise BudgetExceeded(f"pair cap {budget.max_pairs} reached")
        s = red.spoly(polys[i], polys[j], lcm)
        if not s:
            continue
        r = red.reduce(s, [polys[k] for k in active])
        if r:
            add(r, sugar)

    # interreduce the (already minimal) active set
    basis = [polys[i] for i in active]
    final = []
    for idx, e in enumerate(basis):
        others = basis[:idx] + basis[idx + 1:]
        tail = red.reduce(dict(e.tail), others)
        terms = dict(tail)
        terms[e.lm] = ring.field.one()
        final.append(Polynomial(ring, terms))
    gb = GroebnerBasis(ring, final, order, True, {"pairs": pairs_done, "polys": len(polys)})
    stats = _VALIDATION.get()
    if stats is not None:
        stats.bases_checked += 1
        stats.pairs_checked += len(final) * (len(final) - 1) // 2
        if not spairs_reduce_to_zero(final, order):
            raise GroebnerValidationError(f"basis failed the S-pair check: {gb}")
        for g in I.gens:
            if not gb.contains(g):
                raise GroebnerValidationError(f"input generator {g} not reduced to zero")
    return gb


def initial_ideal(I: Ideal, order: TermOrder, budget: Budget | None = None) -> MonomialIdeal:
    if I.is_zero():
        return MonomialIdeal(I.ring, [])
    return buchberger(I, order, budget).initial_ideal()


def eliminate(I: Ideal, keep: Iterable[str], base: TermOrder | None = None,
              budget: Budget | None = None, grading: Sequence[int] | None = None) -> Ideal:
    """I intersected with the subring on ``keep`` (generators in that subring)."""
    keep = set(keep)
    ring = I.ring
    elim = [n for n in ring.names if n not in keep]
    sub = ring.subring(keep)
    if not elim:
        return Ideal(sub, [g.to_ring(sub) for g in I.gens])
    if base is None:
        base = degrevlex(ring)
    order = elimination(ring, elim, base)
    gb = buchberger(I, order, budget, grading)
    out = [g.to_ring(sub) for g in gb.elements if not (g.support_variables() & set(elim))]
    return Ideal(sub, out)


def _fresh_name(ring: RingContext, stem: str) -> str:
    name = stem
    k = 0
    while name in ring.index:
        k += 1
        name = f"{stem}{k}"
    return name


def intersect(I: Ideal, J: Ideal, budget: Budget | None = None) -> Ideal:
    """I cap J via u*I + (1-u)*J, eliminating u."""
    if I.ring != J.ring:
        raise ValueError("ideals live in different rings")
    ring = I.ring
    if I.is_zero() or J.is_zero():
        return Ideal(ring, [])
    u = _fresh_name(ring, "u")
    big = ring.extend([Variable(u)], front=True)
    uu = big.var(u)
    gens = [uu * f.to_ring(big) for f in I.gens] + [(1 - uu) * g.to_ring(big) for g in J.gens]
    res = eliminate(Ideal(big, gens), ring.names, budget=budget)
    return Ideal(ring, [g.to_ring(ring) for g in res.gens])


def ideal_equal(I: Ideal, J: Ideal, order: TermOrder | None = None, budget: Budget | None = None) -> bool:
    if I.ring != J.ring:
        raise ValueError("ideals live in different rings")
    order = order if order is not None else degrevlex(I.ring)
    return reduced_key(I, order, budget) == reduced_key(J, order, budget)


def reduced_key(I: Ideal, order: TermOrder, budget: Budget | None = None) -> frozenset:
    if I.is_zero():
        return frozenset()
    return buchberger(I, order, budget).key()


def ideal_product(I: Ideal, J: Ideal) -> Ideal:
    if I.ring != J.ring:
        raise ValueError("ideals live in different rings")
    seen = []
    for f in I.gens:
        for g in J.gens:
            h = f * g
            if h and h not in seen:
                seen.append(h)
    return Ideal(I.ring, seen)


def ideal_power(I: Ideal, k: int) -> Ideal:
    if k < 0:
        raise ValueError("negative power")
    out = Ideal(I.ring, [I.ring.one()])
    for _ in range(k):
        out = ideal_product(out, I)
    return out


def ideal_sum(*ideals: Ideal) -> Ideal:
    ring = ideals[0].ring
    return Ideal(ring, [g for I in ideals for g in I.gens])


def algebra_map_kernel(source: RingContext, images: Sequence[Polynomial],
                       budget: Budget | None = None, base: TermOrder | None = None) -> Ideal:
    """Kernel of the map source -> target sending the i-th variable to ``images[i]``.

    Computed from the graph ideal (s_i - image_i) by eliminating the target
    variables.  When every image is homogeneous the graph ideal is made
    homogeneous for sugar selection by weighting s_i with deg(image_i).
    """
    if len(images) != source.nvars:
        raise ValueError("one image per source variable is required")
    target = images[0].ring
    clash = set(source.names) & set(target.names)
    if clash:
        raise ValueError(f"source and target share variable names {sorted(clash)}")
    big = target.extend(list(source.variables))
    graph = [big.var(n) - img.to_ring(big) for n, img in zip(source.names, images)]
    grading = None
    if all(img.is_homogeneous() and img for img in images):
        grading = [1] * target.nvars + [img.total_degree() for img in images]
        if any(g <= 0 for g in grading):
            grading = None
    if base is None:
        base = degrevlex(big)
    res = eliminate(Ideal(big, graph), source.names, base=base, budget=budget, grading=grading)
    return Ideal(source, [g.to_ring(source) for g in res.gens])


def format_basis(gb: GroebnerBasis, signed: bool = False) -> str:
    return "\n".join(g.to_str(gb.order, signed=signed) for g in gb.elements)
