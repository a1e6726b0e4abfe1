"""Exact linear algebra over Q on list-of-rows matrices of Fractions.

Matrices here are small and sparse (cellular boundary maps, lattice maps),
so elimination skips zero entries rather than vectorising.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


def to_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def zeros(m: int, n: int) -> Matrix:
    return [[Fraction(0)] * n for _ in range(m)]


def identity(n: int) -> Matrix:
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = Fraction(1)
    return out


def transpose(a: Matrix, ncols: int | None = None) -> Matrix:
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


def matmul(a: Matrix, b: Matrix, inner: int | None = None) -> Matrix:
    if not a:
        return []
    if not b:
        return [[] for _ in a]
    n = len(b[0])
    out = []
    for row in a:
        acc = [Fraction(0)] * n
        for k, x in enumerate(row):
            if x:
                bk = b[k]
                for j in range(n):
                    if bk[j]:
                        acc[j] += x * bk[j]
        out.append(acc)
    return out


def matvec(a: Matrix, v: Sequence) -> list[Fraction]:
    return [sum((x * y for x, y in zip(row, v) if x and y), Fraction(0)) for row in a]


def rref(a: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns (input left untouched)."""
    m = [list(row) for row in a]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        lead = m[r][c]
        if lead != 1:
            m[r] = [x / lead for x in m[r]]
        prow = m[r]
        nz = [j for j in range(c, ncols) if prow[j]]
        for i in range(len(m)):
            if i != r:
                f = m[i][c]
                if f:
                    row = m[i]
                    for j in nz:
                        row[j] -= f * prow[j]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: Matrix) -> int:
    return len(rref(a)[1])


def nullspace(a: Matrix, ncols: int) -> Matrix:
    """Basis of {x : a x = 0}, returned as a list of vectors."""
    if not a:
        return identity(ncols)
    red, pivots = rref(a)
    free = [j for j in range(ncols) if j not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -red[i][f]
        basis.append(v)
    return basis


def solve(a: Matrix, b: Sequence) -> list[Fraction] | None:
    """One solution of a x = b, or None when inconsistent."""
    if not a:
        return [] if not any(b) else None
    ncols = len(a[0])
    aug = [list(row) + [Fraction(x)] for row, x in zip(a, b)]
    red, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for i, p in enumerate(pivots):
        x[p] = red[i][ncols]
    return x


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(row) + e for row, e in zip(a, identity(n))]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in red]


def det(a: Sequence[Sequence]) -> Fraction:
    n = len(a)
    m = [[Fraction(x) for x in row] for row in a]
    out = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            out = -out
        out *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            if f:
                for j in range(c, n):
                    m[i][j] -= f * m[c][j]
    return out


def column_space_basis(vectors: Sequence[Sequence]) -> Matrix:
    """A maximal independent subset of ``vectors`` (kept in input order)."""
    vecs = [[Fraction(x) for x in v] for v in vectors]
    if not vecs:
        return []
    _, pivots = rref(transpose(vecs))
    return [vecs[j] for j in pivots]


def coordinates(basis: Matrix, v: Sequence) -> list[Fraction] | None:
    """Coefficients of ``v`` in terms of the independent vectors ``basis``."""
    if not basis:
        return [] if not any(v) else None
    a = transpose(basis)
    return solve(a, v)
