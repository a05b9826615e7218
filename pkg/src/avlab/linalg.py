"""Exact dense linear algebra over a FieldConfig (lists of lists)."""
from __future__ import annotations

from typing import Sequence

from .field import FieldConfig


def rref(rows: Sequence[Sequence], field: FieldConfig) -> tuple[list[list], list[int]]:
    """Reduced row echelon form and pivot columns."""
    mod = field.modulus
    M = [list(r) for r in rows]
    if not M:
        return [], []
    ncols = len(M[0])
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(M):
            break
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = field.inv(M[r][c])
        if mod:
            M[r] = [v * inv % mod for v in M[r]]
        else:
            M[r] = [v * inv for v in M[r]]
        pr = M[r]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                row = M[i]
                if mod:
                    M[i] = [(a - f * b) % mod for a, b in zip(row, pr)]
                else:
                    M[i] = [a - f * b for a, b in zip(row, pr)]
        pivots.append(c)
        r += 1
    return M[:r], pivots


def rank(rows: Sequence[Sequence], field: FieldConfig) -> int:
    return len(rref(rows, field)[1])


def inverse(rows: Sequence[Sequence], field: FieldConfig) -> list[list]:
    n = len(rows)
    aug = [list(r) + [field.one() if i == j else field.zero() for j in range(n)] for i, r in enumerate(rows)]
    R, piv = rref(aug, field)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R]


def transpose(rows: Sequence[Sequence]) -> list[list]:
    return [list(c) for c in zip(*rows)]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence], field: FieldConfig) -> list[list]:
    mod = field.modulus
    Bt = transpose(B)
    out = []
    for row in A:
        r = []
        for col in Bt:
            v = sum(a * b for a, b in zip(row, col))
            r.append(v % mod if mod else v)
        out.append(r)
    return out


def nullspace(rows: Sequence[Sequence], field: FieldConfig, ncols: int | None = None) -> list[list]:
    """Basis of {x : rows * x = 0}."""
    if not rows:
        n = ncols or 0
        return [[field.one() if i == j else field.zero() for i in range(n)] for j in range(n)]
    n = len(rows[0])
    R, piv = rref(rows, field)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for fcol in free:
        v = [field.zero()] * n
        v[fcol] = field.one()
        for r, pc in enumerate(piv):
            v[pc] = field.neg(R[r][fcol])
        basis.append(v)
    return basis
