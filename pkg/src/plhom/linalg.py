"""Exact dense linear algebra over an ordered field (Fraction or InfScalar).

Everything here is O(n^3) Gaussian elimination on tiny systems; the point is
exactness, not speed.
"""

from __future__ import annotations


def solve_linear(A, b):
    """One exact solution of A x = b, or None if inconsistent.

    A is a list of rows.  Under-determined systems return a particular
    solution with free variables set to 0.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    M = [list(A[i]) + [b[i]] for i in range(m)]
    pivots = []
    row = 0
    for col in range(n):
        pr = None
        for r in range(row, m):
            if M[r][col] != 0:
                pr = r
                break
        if pr is None:
            continue
        M[row], M[pr] = M[pr], M[row]
        pv = M[row][col]
        M[row] = [v / pv for v in M[row]]
        for r in range(m):
            if r != row and M[r][col] != 0:
                f = M[r][col]
                M[r] = [v - f * w for v, w in zip(M[r], M[row])]
        pivots.append(col)
        row += 1
        if row == m:
            break
    for r in range(row, m):
        if M[r][n] != 0:
            return None
    x = [0] * n
    for r, col in enumerate(pivots):
        x[col] = M[r][n]
    return x


def matrix_rank(rows) -> int:
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    n = len(rows[0])
    rank = 0
    for col in range(n):
        pr = None
        for r in range(rank, len(rows)):
            if rows[r][col] != 0:
                pr = r
                break
        if pr is None:
            continue
        rows[rank], rows[pr] = rows[pr], rows[rank]
        pv = rows[rank][col]
        rows[rank] = [v / pv for v in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [v - f * w for v, w in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def affine_rank(points) -> int:
    """Dimension of the affine hull of the given points (0 for a single point)."""
    if len(points) <= 1:
        return 0
    p0 = points[0]
    return matrix_rank([[c - c0 for c, c0 in zip(p, p0)] for p in points[1:]])


def det(rows):
    """Exact determinant by fraction-free-ish elimination (small matrices)."""
    M = [list(r) for r in rows]
    n = len(M)
    sign = 1
    acc = None
    for col in range(n):
        pr = None
        for r in range(col, n):
            if M[r][col] != 0:
                pr = r
                break
        if pr is None:
            return M[0][0] - M[0][0] if n else 1  # a zero of the right type
        if pr != col:
            M[col], M[pr] = M[pr], M[col]
            sign = -sign
        pv = M[col][col]
        acc = pv if acc is None else acc * pv
        for r in range(col + 1, n):
            if M[r][col] != 0:
                f = M[r][col] / pv
                M[r] = [v - f * w for v, w in zip(M[r], M[col])]
    if acc is None:
        return 1
    return acc if sign > 0 else -acc
