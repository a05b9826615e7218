"""Polynomial rings with named, optionally row-tagged variables and sparse polynomials.

Monomials are exponent tuples aligned with the ring's variable list.  A
polynomial is a map monomial -> nonzero coefficient; it carries no order, so
the same object can be inspected under any :class:`~avlab.orders.TermOrder`.

Text syntax::

    3*t[1,2]*t[2,1] - t[1,1]*t[2,2]
    s[2,3,1] - s[3,1,2]
    x[1]^2 + 1/2*x[2]
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

from .field import FieldConfig

Monomial = tuple  # tuple[int, ...]

_NAME_RE = re.compile(r"^([A-Za-z_][A-Za-z_0-9]*)(?:\[([0-9,\s-]*)\])?$")


@dataclass(frozen=True)
class Variable:
    name: str
    row: int | None = None  # 1-based row tag i; degree e_i in Z^m

    @property
    def family(self) -> str:
        return _NAME_RE.match(self.name).group(1)

    @property
    def indices(self) -> tuple:
        idx = _NAME_RE.match(self.name).group(2)
        if not idx:
            return ()
        return tuple(int(v) for v in idx.split(","))


def var_name(family: str, *indices: int) -> str:
    if not indices:
        return family
    return f"{family}[{','.join(str(i) for i in indices)}]"


def default_row_tag(name: str) -> int | None:
    """Row tags implied by the naming convention: t[i,j] and y[i] live in row i."""
    m = _NAME_RE.match(name)
    if not m:
        raise ValueError(f"bad variable name {name!r}")
    fam, idx = m.group(1), m.group(2)
    if fam in ("t", "y") and idx:
        return int(idx.split(",")[0])
    return None


class RingContext:
    """An ordered list of variables over a ground field, with a Z^m grading.

    ``m`` is the number of row tags in the grading; untagged variables have no
    multidegree.
    """

    def __init__(self, variables: Sequence[Variable | str], field: FieldConfig | None = None,
                 m: int | None = None):
        vs = []
        for v in variables:
            if isinstance(v, str):
                v = Variable(v, default_row_tag(v))
            vs.append(v)
        self.variables: tuple[Variable, ...] = tuple(vs)
        self.names: tuple[str, ...] = tuple(v.name for v in vs)
        if len(set(self.names)) != len(self.names):
            raise ValueError("variable names must be unique")
        self.index: dict[str, int] = {n: i for i, n in enumerate(self.names)}
        self.field = field if field is not None else FieldConfig.prime()
        rows = [v.row for v in vs if v.row is not None]
        if m is None:
            m = max(rows, default=0)
        if any(r < 1 or r > m for r in rows):
            raise ValueError("row tag outside 1..m")
        self.m = m
        self.nvars = len(vs)

    # construction helpers ---------------------------------------------------

    @classmethod
    def t_ring(cls, m: int, n: int, field: FieldConfig | None = None,
               columns: Sequence[Sequence[int]] | None = None) -> "RingContext":
        """K[t_ij], row-major; ``columns[i]`` restricts the column labels of row i+1."""
        names = []
        for i in range(1, m + 1):
            cols = columns[i - 1] if columns is not None else range(1, n + 1)
            names.extend(Variable(var_name("t", i, j), i) for j in cols)
        return cls(names, field, m)

    @classmethod
    def x_ring(cls, n: int, field: FieldConfig | None = None) -> "RingContext":
        return cls([var_name("x", j) for j in range(1, n + 1)], field)

    @classmethod
    def s_ring(cls, points: Iterable[Sequence[int]], field: FieldConfig | None = None,
               family: str = "s") -> "RingContext":
        return cls([var_name(family, *a) for a in points], field)

    def __eq__(self, other):
        return (isinstance(other, RingContext) and self.variables == other.variables
                and self.field == other.field and self.m == other.m)

    def __hash__(self):
        return hash((self.variables, self.field, self.m))

    def __repr__(self):
        return f"RingContext({', '.join(self.names)}; {self.field})"

    def extend(self, extra: Sequence[Variable | str], front: bool = False) -> "RingContext":
        extra = [Variable(v, default_row_tag(v)) if isinstance(v, str) else v for v in extra]
        vs = list(extra) + list(self.variables) if front else list(self.variables) + list(extra)
        m = max([self.m] + [v.row for v in extra if v.row is not None])
        return RingContext(vs, self.field, m)

    def subring(self, names: Iterable[str]) -> "RingContext":
        keep = set(names)
        return RingContext([v for v in self.variables if v.name in keep], self.field, self.m)

    # elements ---------------------------------------------------------------

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        c = self.field(c)
        return Polynomial(self, {(0,) * self.nvars: c} if c else {})

    def var(self, name: str) -> "Polynomial":
        e = [0] * self.nvars
        e[self.index[name]] = 1
        return Polynomial(self, {tuple(e): self.field.one()})

    def gens(self) -> list["Polynomial"]:
        return [self.var(n) for n in self.names]

    def monomial(self, exps: Mapping[str, int] | Sequence[int], coeff=1) -> "Polynomial":
        if isinstance(exps, Mapping):
            e = [0] * self.nvars
            for n, k in exps.items():
                e[self.index[n]] += k
            exps = e
        c = self.field(coeff)
        return Polynomial(self, {tuple(exps): c} if c else {})

    def from_terms(self, terms: Mapping[Monomial, object]) -> "Polynomial":
        f = self.field
        out = {}
        for mono, c in terms.items():
            c = f(c)
            if c:
                out[tuple(mono)] = c
        return Polynomial(self, out)

    def parse(self, text: str) -> "Polynomial":
        return _Parser(self, text).parse()

    def monomial_str(self, mono: Monomial) -> str:
        parts = []
        for i, k in enumerate(mono):
            if k == 1:
                parts.append(self.names[i])
            elif k > 1:
                parts.append(f"{self.names[i]}^{k}")
        return "*".join(parts) if parts else "1"

    def multidegree_of(self, mono: Monomial) -> tuple[int, ...]:
        deg = [0] * self.m
        for i, k in enumerate(mono):
            if k:
                r = self.variables[i].row
                if r is None:
                    raise ValueError(f"variable {self.names[i]} carries no row tag")
                deg[r - 1] += k
        return tuple(deg)

    def monomials_of_degree(self, d: int) -> list[Monomial]:
        """All exponent vectors of total degree d (lexicographically descending)."""
        out = []

        def rec(i, left, acc):
            if i == self.nvars - 1:
                out.append(tuple(acc + [left]))
                return
            for k in range(left, -1, -1):
                rec(i + 1, left - k, acc + [k])

        if self.nvars == 0:
            return [()] if d == 0 else []
        rec(0, d, [])
        return out


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True iff a | b."""
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x if x > y else y for x, y in zip(a, b))


def mono_coprime(a: Monomial, b: Monomial) -> bool:
    return not any(x and y for x, y in zip(a, b))


class NotMultihomogeneous(Exception):
    """Sentinel outcome of :meth:`Polynomial.multidegree` (raised, then caught by callers)."""


class Polynomial:
    """Sparse polynomial: ``terms`` maps exponent tuples to nonzero field elements.

    Treat instances as immutable; arithmetic always returns new objects.
    """

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: RingContext, terms: dict):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # basic protocol ---------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __repr__(self):
        return f"Polynomial({self.to_str()!r})"

    def __str__(self):
        return self.to_str()

    def _check(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ValueError("polynomials live in different rings")
            return other
        return self.ring.const(other)

    # arithmetic -------------------------------------------------------------

    def __add__(self, other):
        other = self._check(other)
        mod = self.ring.field.modulus
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if mod:
                v %= mod
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        mod = self.ring.field.modulus
        if mod:
            return Polynomial(self.ring, {m: (-c) % mod for m, c in self.terms.items()})
        return Polynomial(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def scale(self, c) -> "Polynomial":
        f = self.ring.field
        c = f(c)
        if not c:
            return self.ring.zero()
        return Polynomial(self.ring, {m: f.mul(v, c) for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._check(other)
        mod = self.ring.field.modulus
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        if mod:
            out = {m: c % mod for m, c in out.items() if c % mod}
        else:
            out = {m: c for m, c in out.items() if c}
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def mul_monomial(self, mono: Monomial, coeff=None) -> "Polynomial":
        f = self.ring.field
        if coeff is None:
            return Polynomial(self.ring, {mono_mul(m, mono): c for m, c in self.terms.items()})
        return Polynomial(self.ring, {mono_mul(m, mono): f.mul(c, coeff) for m, c in self.terms.items()})

    # inspection -------------------------------------------------------------

    def monomials(self) -> list[Monomial]:
        return list(self.terms)

    def support_variables(self) -> set[str]:
        used = set()
        for m in self.terms:
            for i, k in enumerate(m):
                if k:
                    used.add(self.ring.names[i])
        return used

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def multidegree(self) -> tuple[int, ...]:
        """Common Z^m-degree of all terms.

        Raises :class:`NotMultihomogeneous` when terms disagree and ValueError
        when an untagged variable occurs.
        """
        degs = {self.ring.multidegree_of(m) for m in self.terms}
        if len(degs) > 1:
            raise NotMultihomogeneous(str(self))
        if not degs:
            return (0,) * self.ring.m
        return degs.pop()

    def leading_monomial(self, order) -> Monomial:
        return max(self.terms, key=order.key)

    def leading_coefficient(self, order):
        return self.terms[self.leading_monomial(order)]

    def sorted_terms(self, order) -> list[tuple[Monomial, object]]:
        """Terms in descending order."""
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def monic(self, order) -> "Polynomial":
        if not self.terms:
            return self
        return self.scale(self.ring.field.inv(self.leading_coefficient(order)))

    # maps -------------------------------------------------------------------

    def substitute(self, images: Mapping[str, "Polynomial"] | Sequence["Polynomial"],
                   target: RingContext | None = None) -> "Polynomial":
        """Apply the algebra map sending variable i to ``images[i]``."""
        if isinstance(images, Mapping):
            seq = [images.get(n) for n in self.ring.names]
        else:
            seq = list(images)
        if target is None:
            target = next(g.ring for g in seq if g is not None)
        cache: dict = {}
        out = target.zero()
        for mono, c in self.terms.items():
            term = target.const(c)
            for i, k in enumerate(mono):
                if k:
                    if seq[i] is None:
                        raise ValueError(f"no image for {self.ring.names[i]}")
                    key = (i, k)
                    if key not in cache:
                        cache[key] = seq[i] ** k
                    term = term * cache[key]
            out = out + term
        return out

    def to_ring(self, ring: RingContext) -> "Polynomial":
        """Re-express in another ring by matching variable names."""
        if ring is self.ring or ring == self.ring:
            return Polynomial(ring, self.terms)
        pos = []
        for i, n in enumerate(self.ring.names):
            pos.append(ring.index.get(n))
        out = {}
        for mono, c in self.terms.items():
            e = [0] * ring.nvars
            for i, k in enumerate(mono):
                if k:
                    if pos[i] is None:
                        raise ValueError(f"variable {self.ring.names[i]} absent from target ring")
                    e[pos[i]] = k
            out[tuple(e)] = ring.field(c) if ring.field != self.ring.field else c
        return ring.from_terms(out) if ring.field != self.ring.field else Polynomial(ring, out)

    # text -------------------------------------------------------------------

    def to_str(self, order=None, signed: bool = False) -> str:
        if not self.terms:
            return "0"
        if order is None:
            items = sorted(self.terms.items(), reverse=True)
        else:
            items = self.sorted_terms(order)
        fld = self.ring.field
        out = []
        for idx, (mono, c) in enumerate(items):
            if signed or fld.kind == "rationals":
                c = fld.signed(c)
                neg = c < 0
                c = -c if neg else c
            else:
                neg = False
            ms = self.ring.monomial_str(mono)
            if ms == "1":
                body = str(c)
            elif c == 1:
                body = ms
            else:
                body = f"{c}*{ms}"
            if idx == 0:
                out.append(f"-{body}" if neg else body)
            else:
                out.append(f" - {body}" if neg else f" + {body}")
        return "".join(out)


class _Parser:
    _TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*(?:\[[0-9,\s-]*\])?)|(\*\*|[-+*/^()]))")

    def __init__(self, ring: RingContext, text: str):
        self.ring = ring
        self.tokens = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            m = self._TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse {text[pos:]!r}")
            num, name, op = m.groups()
            if num is not None:
                self.tokens.append(("num", num))
            elif name is not None:
                self.tokens.append(("var", re.sub(r"\s+", "", name)))
            else:
                self.tokens.append(("op", "^" if op == "**" else op))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self) -> Polynomial:
        p = self.expr()
        if self.i != len(self.tokens):
            raise ValueError(f"trailing input at token {self.peek()}")
        return p

    def expr(self):
        sign = 1
        if self.peek() == ("op", "-"):
            self.take()
            sign = -1
        elif self.peek() == ("op", "+"):
            self.take()
        acc = self.term()
        if sign < 0:
            acc = -acc
        while self.peek() in (("op", "+"), ("op", "-")):
            _, op = self.take()
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self):
        acc = self.power()
        while self.peek() in (("op", "*"), ("op", "/")):
            _, op = self.take()
            rhs = self.power()
            if op == "*":
                acc = acc * rhs
            else:
                if len(rhs.terms) != 1 or any(next(iter(rhs.terms))):
                    raise ValueError("division only by constants")
                acc = acc.scale(self.ring.field.inv(next(iter(rhs.terms.values()))))
        return acc

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise ValueError("exponent must be an integer")
            base = base ** int(val)
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return self.ring.const(Fraction(val))
        if kind == "var":
            if val not in self.ring.index:
                raise ValueError(f"unknown variable {val!r}")
            return self.ring.var(val)
        if (kind, val) == ("op", "("):
            e = self.expr()
            if self.take() != ("op", ")"):
                raise ValueError("missing ')'")
            return e
        if (kind, val) == ("op", "-"):
            return -self.power()
        raise ValueError(f"unexpected token {val!r}")


def natural_key(name: str):
    m = _NAME_RE.match(name)
    idx = m.group(2)
    return (m.group(1), tuple(int(v) for v in idx.split(",")) if idx else ())


def ring_from_text(lines: Iterable[str], field: FieldConfig | None = None) -> RingContext:
    """Infer a ring from the variable names used in polynomial text."""
    names = set()
    for line in lines:
        for tok in _Parser._TOKEN.finditer(line):
            if tok.group(2):
                names.add(re.sub(r"\s+", "", tok.group(2)))
    return RingContext(sorted(names, key=natural_key), field)


def parse_polys(ring: RingContext, lines: Iterable[str]) -> list[Polynomial]:
    out = []
    for line in lines:
        line = line.split("#", 1)[0].strip().rstrip(",;")
        if line:
            out.append(ring.parse(line))
    return out


def box(bounds: Sequence[int]) -> list[tuple[int, ...]]:
    """Points of {1..b1} x ... x {1..bm}, lexicographic."""
    return list(product(*(range(1, b + 1) for b in bounds)))
