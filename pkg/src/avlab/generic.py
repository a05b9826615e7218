"""Initial ideals of 2-minors of a generic row-local matrix L and the ASL structure of A(V).

The combinatorial ideal J is generated by t_{i1 j1} ... t_{ik jk} with
i1 < ... < ik and j1 + ... + jk >= n + k.  For generic L and any term order
with t_{i,j+1} > t_{i,j}, in(I_2(L)) = J.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from math import comb
from typing import Sequence

from .field import FieldConfig
from .groebner import (Budget, BudgetExceeded, Ideal, MonomialIdeal, buchberger, ideal_equal)
from .lattice import (ASLVerdict, PointPoset, StraighteningRelation, asl_verify, join_meet,
                      relation_from_polynomial, revlex_extension)
from .linear_spaces import (LinearSpaceFamily, av_direct, build_L, bv_kernel, direct_images,
                            l_from_tensor)
from .orders import TermOrder, is_row_increasing, random_weight_order, row_increasing
from .ring import Monomial, Polynomial, RingContext, var_name
from .linalg import rank

Cell = tuple  # (i, j), 1-based


# --------------------------------------------------------------------------
# the combinatorial ideal J and its Stanley-Reisner complex

@dataclass
class JIdeal:
    m: int
    n: int
    d: tuple | None
    generators: list[tuple[Cell, ...]]

    def ring(self, field: FieldConfig | None = None) -> RingContext:
        if self.d is None:
            return RingContext.t_ring(self.m, self.n, field)
        return RingContext.t_ring(self.m, self.n, field, [range(1, k + 1) for k in self.d])

    def monomial_ideal(self, ring: RingContext | None = None) -> MonomialIdeal:
        ring = ring or self.ring()
        return MonomialIdeal(ring, [cells_to_mono(ring, g) for g in self.generators])

    def contains_cells(self, cells: Sequence[Cell]) -> bool:
        return any(set(g) <= set(cells) for g in self.generators)


def cells_to_mono(ring: RingContext, cells: Sequence[Cell]) -> Monomial:
    e = [0] * ring.nvars
    for i, j in cells:
        e[ring.index[var_name("t", i, j)]] += 1
    return tuple(e)


def satisfies_star(cells: Sequence[Cell], n: int) -> bool:
    """Distinct rows and column sum >= n + k."""
    rows = [i for i, _ in cells]
    return len(set(rows)) == len(rows) and sum(j for _, j in cells) >= n + len(cells)


def combinatorial_J(m: int, n: int, d: Sequence[int] | None = None) -> JIdeal:
    """Minimal generators of J (optionally restricted to columns j <= d_i in row i)."""
    bounds = list(d) if d is not None else [n] * m
    gens = []
    for k in range(1, m + 1):
        for rows in combinations(range(1, m + 1), k):
            for cols in product(*(range(1, bounds[i - 1] + 1) for i in rows)):
                if sum(cols) < n + k:
                    continue
                cells = tuple(zip(rows, cols))
                # minimal iff no proper sub-selection already satisfies (*)
                if any(satisfies_star(sub, n) for r in range(1, k)
                       for sub in combinations(cells, r)):
                    continue
                gens.append(cells)
    return JIdeal(m, n, tuple(d) if d is not None else None, gens)


@dataclass
class FacetComplex:
    m: int
    n: int
    facets: list[tuple[tuple[int, ...], frozenset]]  # (p, F_p)

    def sizes(self) -> list[int]:
        return [len(F) for _, F in self.facets]


def deltaJ_facets(m: int, n: int) -> FacetComplex:
    """F_p = {t_ij : j <= p_i} for p in {1..n}^m with sum(p) = n + m - 1."""
    out = []
    for p in product(range(1, n + 1), repeat=m):
        if sum(p) == n + m - 1:
            F = frozenset((i + 1, j) for i in range(m) for j in range(1, p[i] + 1))
            out.append((p, F))
    return FacetComplex(m, n, out)


def facet_stats(F: FacetComplex, N: int) -> tuple[int, int, bool]:
    """(codimension, degree, unmixed) of a Stanley-Reisner complex given by its facets."""
    sizes = F.sizes()
    top = max(sizes)
    return N - top, sum(1 for s in sizes if s == top), len(set(sizes)) == 1


def sr_facets(I: MonomialIdeal) -> list[frozenset]:
    """Facets of the Stanley-Reisner complex of a squarefree monomial ideal (variable indices)."""
    ring = I.ring
    supports = []
    for g in I.gens:
        if any(e > 1 for e in g):
            raise ValueError("ideal is not squarefree")
        supports.append(frozenset(i for i, e in enumerate(g) if e))
    N = ring.nvars
    faces: list[frozenset] = []

    def rec(i, cur):
        if i == N:
            faces.append(frozenset(cur))
            return
        cand = cur | {i}
        if not any(s <= cand for s in supports):
            rec(i + 1, cand)
        rec(i + 1, cur)

    rec(0, frozenset())
    return [F for F in faces if not any(F < G for G in faces)]


def complex_faces_avoiding(J: JIdeal) -> set[frozenset]:
    """All sets of cells containing no generator support (exhaustive)."""
    cells = [(i, j) for i in range(1, J.m + 1) for j in range(1, J.n + 1)]
    gens = [frozenset(g) for g in J.generators]
    out = set()
    for mask in range(1 << len(cells)):
        S = frozenset(c for k, c in enumerate(cells) if mask >> k & 1)
        if not any(g <= S for g in gens):
            out.add(S)
    return out


def complex_from_facets(F: FacetComplex) -> set[frozenset]:
    out = set()
    for _, facet in F.facets:
        items = sorted(facet)
        for mask in range(1 << len(items)):
            out.add(frozenset(c for k, c in enumerate(items) if mask >> k & 1))
    return out


# --------------------------------------------------------------------------
# generic initial-ideal verification

def random_tensor(m: int, n: int, rng: random.Random, p: int) -> list:
    return [[[rng.randrange(p) for _ in range(n)] for _ in range(n)] for _ in range(m)]


def tensor_rows_independent(a: Sequence, field: FieldConfig) -> bool:
    """Each row's forms L_i1..L_in linearly independent."""
    for Ai in a:
        if rank(Ai, field) != len(Ai):
            return False
    return True


def renamed_J(ring: RingContext, m: int, n: int, order: TermOrder) -> MonomialIdeal:
    """J after renaming each row so that the order becomes row-increasing.

    Row i's variables ranked from smallest (rank 1) to largest under ``order``
    play the roles of t_{i1} < ... < t_{in}.
    """
    J = combinatorial_J(m, n)
    rename = {}
    for i in range(1, m + 1):
        names = [var_name("t", i, j) for j in range(1, n + 1)]
        unit = {nm: tuple(int(k == ring.index[nm]) for k in range(ring.nvars)) for nm in names}
        ranked = sorted(names, key=lambda nm: order.key(unit[nm]))
        for r, nm in enumerate(ranked, 1):
            rename[(i, r)] = ring.variables[ring.index[nm]].indices[1]
    gens = [tuple((i, rename[(i, j)]) for i, j in g) for g in J.generators]
    return MonomialIdeal(ring, [cells_to_mono(ring, g) for g in gens])


@dataclass
class OrderCheck:
    order: list
    equal: bool
    status: str = "ok"  # ok | mismatch | budget-exceeded


@dataclass
class GenericVerdict:
    m: int
    n: int
    trials: int
    certified: int
    flagged: int
    resamples: int
    mismatching_orders: int
    budget_exceeded: int
    checks: list[OrderCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.mismatching_orders == 0 and self.budget_exceeded == 0 and self.certified > 0


def verify_generic_initial(m: int, n: int, seed: int, orders: int | Sequence[TermOrder] = 25,
                           trials: int = 1, family: str = "row-increasing",
                           field: FieldConfig | None = None, budget: Budget | None = None,
                           max_resamples: int = 3) -> GenericVerdict:
    """Compare in(I_2(L)) with J for random generic L under sampled orders.

    A trial whose sample disagrees with J under some order is resampled up to
    ``max_resamples`` times; if it never agrees it is flagged as a possibly
    degenerate sample, excluded from the certified count and reported.
    """
    field = field or FieldConfig.prime()
    rng = random.Random(seed)
    ring = RingContext.t_ring(m, n, field)
    if isinstance(orders, int):
        if family == "row-increasing":
            order_list = [row_increasing(ring, rng) for _ in range(orders)]
        elif family == "any":
            order_list = [random_weight_order(ring, rng) for _ in range(orders)]
        else:
            raise ValueError(f"unknown order family {family!r}")
    else:
        order_list = list(orders)
    targets = [renamed_J(ring, m, n, o) for o in order_list]
    verdict = GenericVerdict(m, n, trials, 0, 0, 0, 0, 0)
    for _ in range(trials):
        for attempt in range(max_resamples + 1):
            a = random_tensor(m, n, rng, field.p)
            I = l_from_tensor(a, field).ideal()
            checks = []
            bad = over = 0
            for o, target in zip(order_list, targets):
                try:
                    ini = buchberger(I, o, budget).initial_ideal()
                except BudgetExceeded:
                    checks.append(OrderCheck(o.to_json()["weights"], False, "budget-exceeded"))
                    over += 1
                    continue
                eq = ini == target
                bad += not eq
                checks.append(OrderCheck(o.to_json()["weights"], eq, "ok" if eq else "mismatch"))
            if bad == 0:
                break
            if attempt < max_resamples:
                verdict.resamples += 1
        verdict.checks.extend(checks)
        verdict.budget_exceeded += over
        if bad:
            verdict.flagged += 1
        else:
            verdict.certified += 1
    return verdict


# --------------------------------------------------------------------------
# cycle binomials of the complete bipartite graph

def cycle_binomials(m: int, n: int, ring: RingContext | None = None) -> list[Polynomial]:
    """f_{I,J} = prod t_{i_k j_k} - prod t_{i_{k+1} j_k}, one per cycle of K_{m,n}."""
    ring = ring or RingContext.t_ring(m, n)
    seen = set()
    out = []
    for s in range(2, min(m, n) + 1):
        for I in permutations(range(1, m + 1), s):
            for J in permutations(range(1, n + 1), s):
                a = frozenset((I[k], J[k]) for k in range(s))
                b = frozenset((I[(k + 1) % s], J[k]) for k in range(s))
                key = frozenset([a, b])
                if key in seen:
                    continue
                seen.add(key)
                first, second = sorted([sorted(a), sorted(b)])
                f = ring.monomial({var_name("t", i, j): 1 for i, j in first}) - \
                    ring.monomial({var_name("t", i, j): 1 for i, j in second})
                out.append(f)
    return out


def two_minors(m: int, n: int, ring: RingContext | None = None) -> list[Polynomial]:
    ring = ring or RingContext.t_ring(m, n)
    t = lambda i, j: ring.var(var_name("t", i, j))
    return [t(a, c) * t(b, e) - t(a, e) * t(b, c)
            for a, b in combinations(range(1, m + 1), 2) for c, e in combinations(range(1, n + 1), 2)]


# --------------------------------------------------------------------------
# the f_M family

@dataclass
class EquatElement:
    leading: tuple[Cell, ...]
    poly: Polynomial
    shape_ok: bool


def mono_cells(ring: RingContext, mono: Monomial) -> list[Cell]:
    cells = []
    for idx, k in enumerate(mono):
        for _ in range(k):
            v = ring.variables[idx]
            cells.append((v.row, v.indices[1]))
    return sorted(cells)


def equat_family(m: int, n: int, order: TermOrder, a: Sequence | None = None, seed: int = 0,
                 field: FieldConfig | None = None, budget: Budget | None = None) -> list[EquatElement]:
    """Reduced Groebner elements f_M, one per minimal generator M of J, with a support-shape check.

    Each trailing monomial must use the rows of M with column indices bounded
    by M's, and lie outside J.
    """
    field = field or FieldConfig.prime()
    ring = RingContext.t_ring(m, n, field)
    if not is_row_increasing(order, ring):
        raise ValueError("equat_family needs a row-increasing order")
    if a is None:
        a = random_tensor(m, n, random.Random(seed), field.p)
    I = l_from_tensor(a, field).ideal()
    J = combinatorial_J(m, n)
    out = []
    if I.is_zero():
        return out
    gb = buchberger(I, order, budget)
    for gen in J.generators:
        M = cells_to_mono(ring, gen)
        f = gb.element_with_leading(M)
        if f is None:
            out.append(EquatElement(gen, ring.zero(), False))
            continue
        ok = True
        bound = dict(gen)
        for mono in f.terms:
            if mono == M:
                continue
            cells = mono_cells(ring, mono)
            rows = [i for i, _ in cells]
            if sorted(rows) != sorted(bound) or any(j > bound[i] for i, j in cells):
                ok = False
            if J.contains_cells(cells):
                ok = False
        out.append(EquatElement(gen, f, ok))
    return out


# --------------------------------------------------------------------------
# straightening relations and Krull dimension / degree of A(V)

def _row_increasing_base(ring: RingContext) -> TermOrder:
    """Deterministic row-increasing weight order: w(t_ij) = j."""
    w = [v.indices[1] for v in ring.variables]
    return TermOrder([w], ring.nvars, "row-increasing", ring)


def l_alpha_expansions(V: LinearSpaceFamily, budget: Budget | None = None) -> dict[tuple, dict[tuple, object]]:
    """For a outside H_n(d): t_a == sum lambda_{a,b} t_b (b in H_n(d)) modulo Ker(T(V) -> B(V))."""
    L = build_L(V)
    base = _row_increasing_base(L.ring)
    bv = bv_kernel(V, base=base, budget=budget)
    ring = bv.ring
    n = V.n
    out = {}
    for alpha in product(*(range(1, k + 1) for k in V.d)):
        if sum(alpha) - len(alpha) < n:
            continue
        t_alpha = ring.monomial({var_name("t", i + 1, a): 1 for i, a in enumerate(alpha)})
        nf = bv.gb.normal_form(t_alpha) if bv.gb is not None else t_alpha
        exp = {}
        for mono, c in nf.terms.items():
            cells = mono_cells(ring, mono)
            exp[tuple(j for _, j in cells)] = c
        out[alpha] = exp
    return out


@dataclass
class StraighteningResult:
    poset: PointPoset
    ring: RingContext
    presentation: list[Polynomial]      # types (a) and (b), unreduced
    types: list[str]
    relations: list[StraighteningRelation]  # reduced revlex-extension form (ASL2 shaped)
    expansions: dict


def straightening_relations(V: LinearSpaceFamily, budget: Budget | None = None) -> StraighteningResult:
    """Relations of A(V) on H_n(d) for generic V.

    Type (a): s_a s_b - s_{a v b} s_{a ^ b} when a v b in H_n(d).
    Type (b): s_a s_b - sum lambda_c s_c s_{a ^ b}, substituting the expansion
    of t_{a v b} read off the B(V) kernel.
    """
    if V.is_monomial():
        raise ValueError("straightening relations are defined for generic families, not coordinate subspaces")
    n = V.n
    H = PointPoset.truncated(V.d, n)
    ring = H.ring(V.field)
    s = lambda p: ring.var(var_name("s", *p))
    exps = l_alpha_expansions(V, budget)
    pres, types = [], []
    for a, b in H.incomparable_pairs():
        j, mt = join_meet(a, b)
        if j in H:
            pres.append(s(a) * s(b) - s(j) * s(mt))
            types.append("a")
        else:
            lin = ring.zero()
            for gamma, c in exps[j].items():
                lin = lin + s(gamma).scale(c)
            pres.append(s(a) * s(b) - lin * s(mt))
            types.append("b")
    ext = next(iter(H.linear_extensions()))
    order = revlex_extension(H, ext, ring)
    rels = []
    I = Ideal(ring, pres)
    if not I.is_zero():
        gb = buchberger(I, order, budget)
        for g in gb.elements:
            rels.append(relation_from_polynomial(g, g.leading_monomial(order), H))
    return StraighteningResult(H, ring, pres, types, rels, exps)


def display_relations(res: StraighteningResult) -> list[str]:
    """Relations printed with the shared linear form written as ``L`` where it appears."""
    out = []
    for f, kind in zip(res.presentation, res.types):
        out.append(f"({kind}) {f.to_str(signed=True)}")
    return out


@dataclass
class DimDegree:
    dim: int
    degree: int
    dim_formula: int
    degree_chains: int
    max_chain_size: int

    @property
    def consistent(self) -> bool:
        return self.dim == self.dim_formula and self.degree == self.degree_chains


def krull_dim_degree(V: LinearSpaceFamily, presentation: Ideal | None = None,
                     budget: Budget | None = None) -> DimDegree:
    """Dimension and degree of A(V) read from in_tau(Ker F) under a revlex extension."""
    n = V.n
    H = PointPoset.truncated(V.d, n)
    if presentation is None:
        presentation = av_direct(V, "truncated", budget).ideal
    ring = presentation.ring
    ext = next(iter(H.linear_extensions()))
    order = revlex_extension(H, ext, ring)
    if presentation.is_zero():
        ini = MonomialIdeal(ring, [])
    else:
        ini = buchberger(presentation, order, budget).initial_ideal()
    facets = sr_facets(ini)
    top = max(len(F) for F in facets)
    deg = sum(1 for F in facets if len(F) == top)
    dim_formula = min(n, 1 - V.m + sum(V.d))
    return DimDegree(top, deg, dim_formula, H.maximal_chain_count(), top)


def hilbert_function_av(V: LinearSpaceFamily, k: int) -> int:
    """dim_K of A(V) in degree k: span of k-fold products of the generators f_{1a_1}...f_{ma_m}."""
    from .linear_spaces import _box_points
    X = RingContext.x_ring(V.n, V.field)
    gens = direct_images(V, _box_points(V), X)
    span = [X.one()]
    for _ in range(k):
        nxt = {}
        for p in span:
            for g in gens:
                q = p * g
                nxt[frozenset(q.terms.items())] = q
        span = _independent(list(nxt.values()), V.field)
    return len(span)


def _independent(polys: list[Polynomial], field: FieldConfig) -> list[Polynomial]:
    monos = sorted({m for p in polys for m in p.terms})
    col = {m: i for i, m in enumerate(monos)}
    rows = []
    for p in polys:
        r = [0] * len(monos)
        for m, c in p.terms.items():
            r[col[m]] = c
        rows.append(r)
    from .linalg import rref
    R, _ = rref(rows, field)
    ring = polys[0].ring if polys else None
    return [Polynomial(ring, {monos[i]: c for i, c in enumerate(r) if c}) for r in R]


def veronese_family(n: int, m: int, field: FieldConfig | None = None, seed: int = 0) -> LinearSpaceFamily:
    """m copies of R_1 with generic bases, so A(V) is the m-th Veronese subring."""
    field = field or FieldConfig.prime()
    from .linear_spaces import sample_generic_family
    return sample_generic_family(m, n, (n,) * m, seed, field)
