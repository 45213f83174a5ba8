"""Integer lattices: Hermite normal form and kernels of integer/rational matrices."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence


def hnf(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Zero rows are dropped. Pivots are positive and entries above each pivot
    are reduced into ``[0, pivot)``.
    """
    mat = [list(map(int, r)) for r in rows]
    return _hnf_with_transform(mat, None)[0]


def _hnf_with_transform(mat: list[list[int]], transform: list[list[int]] | None):
    if not mat:
        return [], transform
    ncols = len(mat[0])
    r = 0
    for c in range(ncols):
        # gcd-combine all rows below r into a single pivot at column c
        for i in range(r + 1, len(mat)):
            if mat[i][c] == 0:
                continue
            a, b = mat[r][c], mat[i][c]
            g, x, y = _xgcd(a, b)
            ua, ub = a // g, b // g
            row_r = [x * p + y * q for p, q in zip(mat[r], mat[i])]
            row_i = [ua * q - ub * p for p, q in zip(mat[r], mat[i])]
            mat[r], mat[i] = row_r, row_i
            if transform is not None:
                tr = [x * p + y * q for p, q in zip(transform[r], transform[i])]
                ti = [ua * q - ub * p for p, q in zip(transform[r], transform[i])]
                transform[r], transform[i] = tr, ti
        if r >= len(mat) or mat[r][c] == 0:
            continue
        if mat[r][c] < 0:
            mat[r] = [-v for v in mat[r]]
            if transform is not None:
                transform[r] = [-v for v in transform[r]]
        piv = mat[r][c]
        for i in range(r):
            k = mat[i][c] // piv
            if k:
                mat[i] = [p - k * q for p, q in zip(mat[i], mat[r])]
                if transform is not None:
                    transform[i] = [p - k * q for p, q in zip(transform[i], transform[r])]
        r += 1
        if r == len(mat):
            break
    rank_rows = [row for row in mat if any(row)]
    return rank_rows, transform


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def integer_kernel(matrix: Sequence[Sequence[int]], ncols: int | None = None) -> list[list[int]]:
    """HNF basis of ``{x in Z^n : matrix @ x = 0}``."""
    n = ncols if ncols is not None else (len(matrix[0]) if matrix else 0)
    if n == 0:
        return []
    # rows of [A^T | I]; reducing the A^T part exposes kernel rows in the I part
    at = [[int(matrix[i][j]) for i in range(len(matrix))] for j in range(n)]
    ident = [[int(i == j) for j in range(n)] for i in range(n)]
    if not matrix:
        return hnf(ident)
    reduced, transform = _hnf_with_transform(at, ident)
    kernel = [transform[i] for i in range(len(at)) if not any(at[i])]
    return hnf(kernel)


def in_lattice_span(basis: Sequence[Sequence[int]], v: Sequence[int]) -> bool:
    """Whether ``v`` is an integer combination of the rows of ``basis``."""
    if not any(v):
        return True
    if not basis:
        return False
    return hnf(list(basis) + [list(v)]) == hnf(basis)


def primitive(v: Sequence[Fraction]) -> list[int]:
    """Scale a nonzero rational vector to a primitive integer vector, first nonzero entry positive."""
    den = lcm(*(Fraction(c).denominator for c in v))
    ints = [int(Fraction(c) * den) for c in v]
    g = 0
    for c in ints:
        g = gcd(g, c)
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    lead = next(c for c in ints if c)
    if lead < 0:
        g = -g
    return [c // g for c in ints]


def rational_kernel(matrix: Sequence[Sequence[Fraction]], ncols: int) -> list[list[int]]:
    """Basis of the rational kernel, one primitive integer vector per free column."""
    rows = [[Fraction(c) for c in r] for r in matrix]
    pivots: list[int] = []
    r0 = 0
    for c in range(ncols):
        piv = next((i for i in range(r0, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r0], rows[piv] = rows[piv], rows[r0]
        inv = 1 / rows[r0][c]
        rows[r0] = [x * inv for x in rows[r0]]
        for i in range(len(rows)):
            if i != r0 and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r0])]
        pivots.append(c)
        r0 += 1
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][free]
        basis.append(primitive(v))
    return basis
