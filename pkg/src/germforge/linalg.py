"""Exact Gaussian elimination over the rationals (gmpy2.mpq)."""

from __future__ import annotations

from gmpy2 import mpq


def row_reduce(rows, ncols):
    """Reduced row echelon form in place; returns the pivot column list."""
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(rows):
            break
        p = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return pivots


def rank(matrix) -> int:
    if not matrix:
        return 0
    rows = [[mpq(v) for v in row] for row in matrix]
    return len(row_reduce(rows, len(rows[0])))


def solve(A, b):
    """A particular solution of ``A v = b`` with free variables set to 0, or None."""
    n = len(A[0]) if A else 0
    rows = [[mpq(v) for v in row] + [mpq(bi)] for row, bi in zip(A, b)]
    pivots = row_reduce(rows, n + 1)
    if n in pivots:
        return None
    v = [mpq(0)] * n
    for i, c in enumerate(pivots):
        v[c] = rows[i][n]
    return v
