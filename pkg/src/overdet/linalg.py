"""Exact linear algebra over Q(i) and determinants of polynomial matrices."""

from __future__ import annotations

from itertools import combinations
from typing import List, Sequence

from .poly import ONE, ZERO, GaussPoly, GaussRational


def rref(rows: Sequence[Sequence]) -> tuple:
    """Reduced row echelon form. Returns (matrix, pivot column list)."""
    m = [[GaussRational.coerce(x) for x in row] for row in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    if not rows or not len(rows[0]):
        return 0
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> List[list]:
    """Basis of {x : A x = 0} as a list of column vectors (given as lists)."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if not rows:
        return [[ONE if j == i else ZERO for j in range(ncols)] for i in range(ncols)]
    m, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for i, p in enumerate(pivots):
            v[p] = -m[i][f]
        basis.append(v)
    return basis


def transpose(rows: Sequence[Sequence]) -> list:
    if not rows:
        return []
    return [list(col) for col in zip(*rows)]


def poly_det(mat: Sequence[Sequence[GaussPoly]], nvars: int) -> GaussPoly:
    """Determinant by cofactor expansion along the first row (small sizes)."""
    n = len(mat)
    if n == 0:
        return GaussPoly.one(nvars)
    cache = {}

    def det(rows: tuple, cols: tuple) -> GaussPoly:
        key = (rows, cols)
        if key in cache:
            return cache[key]
        if len(rows) == 1:
            out = mat[rows[0]][cols[0]]
        else:
            out = GaussPoly.zero(nvars)
            r0 = rows[0]
            for k, c in enumerate(cols):
                a = mat[r0][c]
                if a.is_zero():
                    continue
                sub = det(rows[1:], cols[:k] + cols[k + 1:])
                term = a * sub
                out = out - term if k % 2 else out + term
        cache[key] = out
        return out

    return det(tuple(range(n)), tuple(range(n)))


def poly_minors(mat: Sequence[Sequence[GaussPoly]], size: int, nvars: int) -> List[GaussPoly]:
    """All size x size minors, rows and columns in lexicographic subset order."""
    nrows = len(mat)
    ncols = len(mat[0]) if nrows else 0
    if size == 0:
        return [GaussPoly.one(nvars)]
    out = []
    for rs in combinations(range(nrows), size):
        for cs in combinations(range(ncols), size):
            sub = [[mat[i][j] for j in cs] for i in rs]
            out.append(poly_det(sub, nvars))
    return out


def sparse_rank(rows) -> int:
    """Rank of a matrix given as a list of {column: value} dicts.

    Row echelon elimination on the leading column only; fast on the very
    sparse monomial-slice matrices.
    """
    pivots = {}
    for row in rows:
        r = {c: GaussRational.coerce(v) for c, v in row.items() if v}
        while r:
            c = min(r)
            piv = pivots.get(c)
            if piv is None:
                inv = r[c].inverse()
                pivots[c] = {k: v * inv for k, v in r.items()}
                break
            f = r[c]
            for k, v in piv.items():
                new = r.get(k, ZERO) - f * v
                if new:
                    r[k] = new
                else:
                    r.pop(k, None)
    return len(pivots)
