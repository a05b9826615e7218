"""Families of linear-form spaces V_1..V_m in K[x_1..x_n] and the algebras they generate.

For a family V we build the m x n matrix L whose 2-minors cut out the
presentation t_ij -> y_i f_ij of the Segre product, the kernel of
T(V) -> B(V) by elimination, and A(V) as a quotient of K[s_a] either directly
(kernel of s_a -> f_{1 a_1} ... f_{m a_m}) or through the diagonal of B(V).
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Sequence

from .field import FieldConfig
from .groebner import (Budget, GroebnerBasis, Ideal, algebra_map_kernel, buchberger, eliminate,
                       ideal_equal, ideal_power, ideal_product, intersect)
from .lattice import PointPoset, hibi_relations, rank as point_rank
from .linalg import inverse, rank, transpose
from .orders import TermOrder, degrevlex
from .ring import NotMultihomogeneous, Polynomial, RingContext, Variable, var_name


class DiagonalBoundError(ValueError):
    """A Groebner element of the B(V) kernel exceeds multidegree (1,...,1)."""


@dataclass(frozen=True)
class LinearSpaceFamily:
    """V_i spanned by the rows of ``spaces[i]`` (d_i x n coefficient matrices)."""

    n: int
    spaces: tuple
    field: FieldConfig = FieldConfig.prime()

    def __post_init__(self):
        fixed = []
        for M in self.spaces:
            M = tuple(tuple(self.field(c) for c in row) for row in M)
            if not M or any(len(r) != self.n for r in M):
                raise ValueError("each space needs rows of length n")
            if rank(M, self.field) != len(M):
                raise ValueError("basis rows are linearly dependent")
            fixed.append(M)
        object.__setattr__(self, "spaces", tuple(fixed))

    @classmethod
    def monomial(cls, sets: Sequence[Sequence[int]], n: int, field: FieldConfig | None = None) -> "LinearSpaceFamily":
        """V_i = <x_j : j in C_i>."""
        field = field or FieldConfig.prime()
        spaces = []
        for C in sets:
            spaces.append([[1 if k == j else 0 for k in range(1, n + 1)] for j in sorted(C)])
        return cls(n, tuple(spaces), field)

    @property
    def m(self) -> int:
        return len(self.spaces)

    @property
    def d(self) -> tuple[int, ...]:
        return tuple(len(M) for M in self.spaces)

    def is_monomial(self) -> bool:
        for M in self.spaces:
            for row in M:
                if sorted(row) != [0] * (self.n - 1) + [1]:
                    return False
        return True

    def basis_labels(self, i: int) -> list[int]:
        """Column labels of V_i's basis: x-indices in the monomial case, 1..d_i otherwise."""
        if self.is_monomial():
            return [row.index(1) + 1 for row in self.spaces[i]]
        return list(range(1, len(self.spaces[i]) + 1))

    def completion(self, i: int) -> tuple[list[list], list[int]]:
        """Basis of R_1 extending V_i's basis by unit vectors, with column labels."""
        M = [list(r) for r in self.spaces[i]]
        labels = self.basis_labels(i)
        monomial = self.is_monomial()
        for k in range(self.n):
            if len(M) == self.n:
                break
            e = [self.field.one() if j == k else self.field.zero() for j in range(self.n)]
            if rank(M + [e], self.field) > len(M):
                M.append(e)
                labels.append(k + 1 if monomial else len(M))
        return M, labels

    def forms(self, ring: RingContext | None = None) -> list[list[Polynomial]]:
        """f_ij as polynomials in K[x]."""
        X = ring or RingContext.x_ring(self.n, self.field)
        out = []
        for M in self.spaces:
            row = []
            for coeffs in M:
                e = X.zero()
                for k, c in enumerate(coeffs):
                    if c:
                        e = e + X.var(var_name("x", k + 1)).scale(c)
                row.append(e)
            out.append(row)
        return out

    # text format ------------------------------------------------------------

    def dump(self) -> str:
        lines = [" ".join(str(v) for v in (self.m, self.n) + self.d)]
        for M in self.spaces:
            for row in M:
                lines.append(" ".join(self.field.format(c) for c in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str, field: FieldConfig | None = None) -> "LinearSpaceFamily":
        field = field or FieldConfig.prime()
        rows = [line.split("#", 1)[0].split() for line in text.splitlines()]
        rows = [r for r in rows if r]
        head = [int(v) for v in rows[0]]
        m, n, d = head[0], head[1], head[2:]
        if len(d) != m:
            raise ValueError("header must be 'm n d1 ... dm'")
        body = rows[1:]
        if len(body) != sum(d):
            raise ValueError(f"expected {sum(d)} coefficient rows, found {len(body)}")
        spaces = []
        pos = 0
        for di in d:
            spaces.append([[field(v) for v in r] for r in body[pos:pos + di]])
            pos += di
        if any(len(r) != n for M in spaces for r in M):
            raise ValueError("coefficient rows must have n entries")
        return cls(n, tuple(spaces), field)


def sample_generic_family(m: int, n: int, d: Sequence[int], seed: int,
                          field: FieldConfig | None = None, bound: int | None = None) -> LinearSpaceFamily:
    """Uniform random coefficients, resampled per space until full row rank."""
    field = field or FieldConfig.prime()
    if len(d) != m or any(k < 1 or k > n for k in d):
        raise ValueError("need 1 <= d_i <= n for each of the m spaces")
    if field.kind == "rationals" and bound is None:
        raise ValueError("rationals need an explicit integer coefficient bound")
    rng = random.Random(seed)
    spaces = []
    for k in d:
        while True:
            if field.kind == "prime":
                M = [[rng.randrange(field.p) for _ in range(n)] for _ in range(k)]
            else:
                M = [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(k)]
            if rank(M, field) == k:
                break
        spaces.append(M)
    return LinearSpaceFamily(n, tuple(spaces), field)


@dataclass
class LMatrix:
    """L with L_ij = sum_k A_i[k][j] * t_{i,label_k}; row i only uses row-i variables."""

    ring: RingContext
    entries: list[list[Polynomial]]
    A: list[list[list]]
    labels: list[list[int]]
    d: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.entries)

    @property
    def n(self) -> int:
        return len(self.entries[0])

    def minors(self) -> list[Polynomial]:
        out = []
        L = self.entries
        for a, b in combinations(range(self.m), 2):
            for c, e in combinations(range(self.n), 2):
                f = L[a][c] * L[b][e] - L[a][e] * L[b][c]
                if f:
                    out.append(f)
        return out

    def ideal(self) -> Ideal:
        return Ideal(self.ring, self.minors())

    def tv_names(self) -> list[str]:
        """Variables of T(V): t_{i,label_k} with k <= d_i."""
        return [var_name("t", i + 1, lab) for i in range(self.m) for lab in self.labels[i][:self.d[i]]]

    def coefficient_tensor(self) -> list:
        """a[i][j][k] with L_ij = sum_k a_ijk t_ik (k runs over sorted labels)."""
        out = []
        for i in range(self.m):
            row = []
            lab_sorted = sorted(self.labels[i])
            pos = {lab: k for k, lab in enumerate(self.labels[i])}
            for j in range(self.n):
                row.append([self.A[i][pos[lab]][j] for lab in lab_sorted])
            out.append(row)
        return out


def _t_ring_from_labels(labels: list[list[int]], field: FieldConfig) -> RingContext:
    names = []
    for i, labs in enumerate(labels):
        names.extend(Variable(var_name("t", i + 1, j), i + 1) for j in sorted(labs))
    return RingContext(names, field, len(labels))


def l_from_tensor(a: Sequence, field: FieldConfig | None = None) -> LMatrix:
    """L_ij = sum_k a[i][j][k] t_{i,k+1}."""
    field = field or FieldConfig.prime()
    m = len(a)
    n = len(a[0])
    labels = [list(range(1, n + 1)) for _ in range(m)]
    ring = _t_ring_from_labels(labels, field)
    A = [[[field(a[i][j][k]) for j in range(n)] for k in range(n)] for i in range(m)]
    return _assemble(ring, A, labels, (n,) * m)


def _assemble(ring, A, labels, d) -> LMatrix:
    m = len(A)
    n = len(A[0])
    entries = []
    for i in range(m):
        row = []
        for j in range(n):
            terms = {}
            for k, lab in enumerate(labels[i]):
                c = A[i][k][j]
                if c:
                    e = [0] * ring.nvars
                    e[ring.index[var_name("t", i + 1, lab)]] = 1
                    terms[tuple(e)] = c
            row.append(Polynomial(ring, terms))
        entries.append(row)
    return LMatrix(ring, entries, A, labels, tuple(d))


def build_L(V: LinearSpaceFamily) -> LMatrix:
    """Complete each basis of V_i to a basis f_i of R_1 and set A_i with x = f_i A_i."""
    fld = V.field
    A, labels = [], []
    for i in range(V.m):
        M, labs = V.completion(i)
        if len(M) != V.n:
            raise ValueError("basis completion failed")
        # f_i = x M^T, so x = f_i (M^T)^{-1}
        A.append(inverse(transpose(M), fld))
        labels.append(labs)
    ring = _t_ring_from_labels(labels, fld)
    return _assemble(ring, A, labels, V.d)


def segre_images(V: LinearSpaceFamily, L: LMatrix) -> tuple[RingContext, dict[str, Polynomial]]:
    """The presentation phi: t_{i,label_k} -> y_i f_ik into K[x, y]."""
    fld = V.field
    XY = RingContext([var_name("x", j) for j in range(1, V.n + 1)]
                     + [Variable(var_name("y", i), i) for i in range(1, V.m + 1)], fld, V.m)
    images = {}
    for i in range(V.m):
        M, labs = V.completion(i)
        y = XY.var(var_name("y", i + 1))
        for coeffs, lab in zip(M, labs):
            f = XY.zero()
            for k, c in enumerate(coeffs):
                if c:
                    f = f + XY.var(var_name("x", k + 1)).scale(c)
            images[var_name("t", i + 1, lab)] = y * f
    return XY, images


@dataclass
class PresentationResult:
    ideal: Ideal
    ring: RingContext
    images: dict[str, Polynomial]
    gb: GroebnerBasis | None = None
    order: TermOrder | None = None
    info: dict = field(default_factory=dict)

    @property
    def generators(self) -> list[Polynomial]:
        return self.ideal.gens

    def vanishes(self) -> bool:
        """Every generator maps to zero under the defining images."""
        return all(g.substitute(self.images).is_zero() for g in self.ideal.gens)

    def text(self, signed: bool = False) -> str:
        return "\n".join(g.to_str(self.order, signed=signed) for g in self.ideal.gens)


def bv_kernel(V: LinearSpaceFamily, base: TermOrder | None = None, budget: Budget | None = None) -> PresentationResult:
    """Ker(T(V) -> B(V)) = I_2(L) cap T(V), by eliminating t_{i,k} with k > d_i."""
    L = build_L(V)
    keep = L.tv_names()
    if base is not None and base.nvars != L.ring.nvars:
        raise ValueError("base order must live on the full t-ring")
    res = eliminate(L.ideal(), keep, base=base, budget=budget)
    sub = res.ring
    order = base.restrict([L.ring.index[nm] for nm in sub.names], sub) if base is not None else degrevlex(sub)
    ker = Ideal(sub, res.gens)
    gb = buchberger(ker, order, budget) if not ker.is_zero() else None
    if gb is not None:
        ker = Ideal(sub, gb.elements)
    _, images = segre_images(V, L)
    images = {k: v for k, v in images.items() if k in sub.index}
    return PresentationResult(ker, sub, images, gb, order, {"L": L})


def _box_points(V: LinearSpaceFamily) -> list[tuple]:
    return [tuple(a) for a in product(*(sorted(V.basis_labels(i)) for i in range(V.m)))]


def diagonal_Q(kernel: Ideal, labels: Sequence[Sequence[int]], s_ring: RingContext,
               order: TermOrder | None = None, budget: Budget | None = None) -> Ideal:
    """(kernel)_Delta as linear forms in K[s_a], s_a = t_{1 a_1} ... t_{m a_m}.

    Uses a Groebner basis of ``kernel`` whose elements all have multidegree
    <= (1,...,1), padding each element h with every monomial of the
    complementary multidegree.
    """
    ring = kernel.ring
    m = len(labels)
    if kernel.is_zero():
        return Ideal(s_ring, [])
    gb = buchberger(kernel, order or degrevlex(ring), budget)
    out = []
    for h in gb.elements:
        try:
            deg = h.multidegree()
        except NotMultihomogeneous:
            raise DiagonalBoundError(f"{h} is not multihomogeneous")
        if any(k > 1 for k in deg):
            raise DiagonalBoundError(f"Groebner element {h} has multidegree {deg} > (1,...,1)")
        free_rows = [i for i in range(m) if deg[i] == 0]
        for pad in product(*(sorted(labels[i]) for i in free_rows)):
            v = {var_name("t", i + 1, j): 1 for i, j in zip(free_rows, pad)}
            hv = h * ring.monomial(v)
            out.append(_to_s(hv, s_ring, m))
    return Ideal(s_ring, out)


def _to_s(f: Polynomial, s_ring: RingContext, m: int) -> Polynomial:
    ring = f.ring
    terms = {}
    for mono, c in f.terms.items():
        alpha = [0] * m
        for idx, k in enumerate(mono):
            if k:
                v = ring.variables[idx]
                alpha[v.row - 1] = v.indices[1]
        e = [0] * s_ring.nvars
        e[s_ring.index[var_name("s", *alpha)]] = 1
        terms[tuple(e)] = c
    return Polynomial(s_ring, terms)


def direct_images(V: LinearSpaceFamily, points: Sequence[tuple], X: RingContext | None = None) -> list[Polynomial]:
    """f_{1 a_1} ... f_{m a_m} for each point a (a_i is a column label of V_i)."""
    X = X or RingContext.x_ring(V.n, V.field)
    F = V.forms(X)
    pos = [{lab: k for k, lab in enumerate(V.basis_labels(i))} for i in range(V.m)]
    out = []
    for a in points:
        g = X.one()
        for i, lab in enumerate(a):
            g = g * F[i][pos[i][lab]]
        out.append(g)
    return out


def av_direct(V: LinearSpaceFamily, index: str = "full", budget: Budget | None = None) -> PresentationResult:
    """Kernel of s_a -> f_{1 a_1} ... f_{m a_m} over H(d) ("full") or H_n(d) ("truncated")."""
    if index == "full":
        points = _box_points(V)
    elif index == "truncated":
        points = [a for a in _box_points(V) if point_rank(a) < V.n]
    else:
        raise ValueError("index must be 'full' or 'truncated'")
    H = PointPoset(points)
    ring = H.ring(V.field)
    X = RingContext.x_ring(V.n, V.field)
    imgs = direct_images(V, H.points, X)
    ker = algebra_map_kernel(ring, imgs, budget)
    order = degrevlex(ring)
    gb = buchberger(ker, order, budget) if not ker.is_zero() else None
    if gb is not None:
        ker = Ideal(ring, gb.elements)
    images = {ring.names[k]: imgs[k] for k in range(ring.nvars)}
    return PresentationResult(ker, ring, images, gb, order, {"route": "direct", "index": index, "poset": H})


def av_diagonal(V: LinearSpaceFamily, budget: Budget | None = None) -> PresentationResult:
    """Hibi relations of the Segre product plus the diagonal of Ker(T(V) -> B(V))."""
    H = PointPoset(_box_points(V))
    ring = H.ring(V.field)
    bv = bv_kernel(V, budget=budget)
    labels = [sorted(V.basis_labels(i)) for i in range(V.m)]
    Q = diagonal_Q(bv.ideal, labels, ring, budget=budget)
    gens = hibi_relations(H, ring) + Q.gens
    ker = Ideal(ring, gens)
    order = degrevlex(ring)
    gb = buchberger(ker, order, budget) if not ker.is_zero() else None
    X = RingContext.x_ring(V.n, V.field)
    imgs = direct_images(V, H.points, X)
    images = {ring.names[k]: imgs[k] for k in range(ring.nvars)}
    return PresentationResult(ker, ring, images, gb, order,
                              {"route": "diagonal", "index": "full", "Q": Q, "poset": H})


def av_presentation(V: LinearSpaceFamily, route: str = "direct", index: str = "full",
                    budget: Budget | None = None) -> PresentationResult | tuple:
    """``route`` is 'direct', 'diagonal' or 'both' (returns (direct, diagonal, equal))."""
    if route == "direct":
        return av_direct(V, index, budget)
    if route == "diagonal":
        return av_diagonal(V, budget)
    if route == "both":
        a = av_direct(V, "full", budget)
        b = av_diagonal(V, budget)
        return a, b, ideal_equal(a.ideal, b.ideal, budget=budget)
    raise ValueError(f"unknown route {route!r}")


def product_dimension(V: LinearSpaceFamily) -> int:
    """dim of V_1 ... V_m: rank of the coefficient matrix of all basis products."""
    X = RingContext.x_ring(V.n, V.field)
    prods = direct_images(V, _box_points(V), X)
    monos = sorted({m for p in prods for m in p.terms})
    col = {m: k for k, m in enumerate(monos)}
    rows = []
    for p in prods:
        r = [0] * len(monos)
        for mono, c in p.terms.items():
            r[col[mono]] = c
        rows.append(r)
    return rank(rows, V.field)


def truncated_size(d: Sequence[int], n: int) -> int:
    return len(PointPoset.truncated(d, n))


@dataclass
class PrimdecVerdict:
    equal: bool
    lhs: Ideal
    rhs: Ideal
    component_ranks: dict[tuple, int]
    expected_ranks: dict[tuple, int]

    @property
    def ranks_ok(self) -> bool:
        return self.component_ranks == self.expected_ranks


def primdec_check(V: LinearSpaceFamily, budget: Budget | None = None) -> PrimdecVerdict:
    """I_1 ... I_m  ==  intersection over nonempty A of I_A^{#A}."""
    if V.m > 4:
        raise ValueError("primdec_check is capped at m <= 4")
    X = RingContext.x_ring(V.n, V.field)
    F = V.forms(X)
    ideals = [Ideal(X, F[i]) for i in range(V.m)]
    lhs = ideals[0]
    for I in ideals[1:]:
        lhs = ideal_product(lhs, I)
    rhs = None
    comp_ranks, expected = {}, {}
    subsets = [A for k in range(1, V.m + 1) for A in combinations(range(V.m), k)]
    # larger powers first keeps the running intersection small
    for A in sorted(subsets, key=len, reverse=True):
        gens = [f for i in A for f in F[i]]
        IA = Ideal(X, gens)
        # a linear ideal's Groebner basis has only linear forms: its size is the rank
        comp_ranks[A] = len(buchberger(IA, degrevlex(X), budget))
        expected[A] = rank([row for i in A for row in V.spaces[i]], V.field)
        power = ideal_power(IA, len(A))
        rhs = power if rhs is None else intersect(rhs, power, budget)
    equal = ideal_equal(lhs, rhs, budget=budget)
    return PrimdecVerdict(equal, lhs, rhs, comp_ranks, expected)
