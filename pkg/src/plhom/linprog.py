"""Exact two-phase simplex method with Bland's anti-cycling rule.

Problems here are tiny (a handful of barycentric weights), so the classic
dense tableau with exact field arithmetic is both simple and fast enough.
Works over any ordered field scalar (Fraction downstairs, InfScalar
upstairs).
"""

from __future__ import annotations

from fractions import Fraction

from .field import InfScalar

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


def _field_cast(values):
    """Pick the common field (Fraction or InfScalar) and a cast function."""
    upstairs = any(isinstance(v, InfScalar) for v in values)
    if upstairs:
        return lambda v: v if isinstance(v, InfScalar) else InfScalar.from_rational(v)
    return lambda v: Fraction(v)


def _pivot(T, basis, row, col):
    pv = T[row][col]
    T[row] = [v / pv for v in T[row]]
    for r in range(len(T)):
        if r != row and T[r][col] != 0:
            f = T[r][col]
            T[r] = [v - f * w for v, w in zip(T[r], T[row])]
    basis[row] = col


def _run_simplex(T, basis, ncols):
    """Minimize the objective in the last tableau row; Bland's rule throughout."""
    m = len(T) - 1
    while True:
        col = None
        for j in range(ncols):
            if T[m][j] < 0:
                col = j
                break
        if col is None:
            return OPTIMAL
        row = None
        best = None
        for i in range(m):
            if T[i][col] > 0:
                ratio = T[i][ncols] / T[i][col]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[row]):
                    best = ratio
                    row = i
        if row is None:
            return UNBOUNDED
        _pivot(T, basis, row, col)


def solve_lp(c, A_eq=(), b_eq=(), A_ub=(), b_ub=()):
    """Minimize c.x subject to A_eq x = b_eq, A_ub x <= b_ub, x >= 0.

    Returns (status, x, value); x and value are None unless status is optimal.
    """
    n = len(c)
    flat = list(c)
    for a in A_eq:
        flat.extend(a)
    for a in A_ub:
        flat.extend(a)
    flat.extend(b_eq)
    flat.extend(b_ub)
    cast = _field_cast(flat)
    c = [cast(v) for v in c]
    A_eq = [[cast(v) for v in a] for a in A_eq]
    A_ub = [[cast(v) for v in a] for a in A_ub]
    b_eq = [cast(v) for v in b_eq]
    b_ub = [cast(v) for v in b_ub]
    zero, one = cast(0), cast(1)
    rows = []
    rhs = []
    for a, b in zip(A_ub, b_ub):
        rows.append(list(a))
        rhs.append(b)
    nslack = len(rows)
    for i in range(nslack):
        rows[i] = rows[i] + [one if j == i else zero for j in range(nslack)]
    for a, b in zip(A_eq, b_eq):
        rows.append(list(a) + [zero] * nslack)
        rhs.append(b)
    total = n + nslack
    m = len(rows)
    # normalize to nonnegative right-hand sides
    for i in range(m):
        if rhs[i] < 0:
            rows[i] = [-v for v in rows[i]]
            rhs[i] = -rhs[i]

    # phase 1: artificial variable per row
    T = []
    basis = []
    for i in range(m):
        art = [one if j == i else zero for j in range(m)]
        T.append(rows[i] + art + [rhs[i]])
        basis.append(total + i)
    obj = [zero] * total + [one] * m + [zero]
    for i in range(m):
        obj = [o - v for o, v in zip(obj, T[i])]
    T.append(obj)
    status = _run_simplex(T, basis, total + m)
    if status != OPTIMAL or T[m][total + m] < 0:
        return INFEASIBLE, None, None
    # drive out lingering artificial basis variables
    for i in range(m):
        if basis[i] >= total:
            piv = None
            for j in range(total):
                if T[i][j] != 0:
                    piv = j
                    break
            if piv is not None:
                _pivot(T, basis, i, piv)
    keep = [i for i in range(m) if basis[i] < total]
    T = [[T[i][j] for j in range(total)] + [T[i][total + m]] for i in keep]
    basis = [basis[i] for i in keep]
    m = len(T)

    # phase 2
    obj = list(c) + [zero] * nslack + [zero]
    T.append(obj)
    for i in range(m):
        bj = basis[i]
        if T[m][bj] != 0:
            f = T[m][bj]
            T[m] = [v - f * w for v, w in zip(T[m], T[i])]
    status = _run_simplex(T, basis, total)
    if status != OPTIMAL:
        return status, None, None
    x = [zero] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = T[i][total]
    value = zero
    for ci, xi in zip(c, x):
        value = value + ci * xi
    return OPTIMAL, x, value


# ---------------------------------------------------------------------------
# geometric helpers phrased as LPs
# ---------------------------------------------------------------------------

def hulls_intersect(points_a, points_b) -> bool:
    """Do conv(points_a) and conv(points_b) meet?  Exact feasibility check."""
    k = len(points_a[0])
    na, nb = len(points_a), len(points_b)
    n = na + nb
    A_eq = []
    b_eq = []
    for i in range(k):
        A_eq.append([p[i] for p in points_a] + [-q[i] for q in points_b])
        b_eq.append(0)
    A_eq.append([1] * na + [0] * nb)
    b_eq.append(1)
    A_eq.append([0] * na + [1] * nb)
    b_eq.append(1)
    status, _, _ = solve_lp([0] * n, A_eq, b_eq)
    return status == OPTIMAL


def max_hull_weight(points_a, points_b, index: int):
    """Maximum of barycentric weight ``index`` of A over conv(A) cap conv(B).

    Returns None when the hulls do not intersect.
    """
    k = len(points_a[0])
    na, nb = len(points_a), len(points_b)
    n = na + nb
    A_eq = []
    b_eq = []
    for i in range(k):
        A_eq.append([p[i] for p in points_a] + [-q[i] for q in points_b])
        b_eq.append(0)
    A_eq.append([1] * na + [0] * nb)
    b_eq.append(1)
    A_eq.append([0] * na + [1] * nb)
    b_eq.append(1)
    c = [0] * n
    c[index] = -1
    status, x, value = solve_lp(c, A_eq, b_eq)
    if status != OPTIMAL:
        return None
    return -value


def linf_distance(points_a, points_b):
    """Exact L-infinity distance between conv(points_a) and conv(points_b)."""
    k = len(points_a[0])
    na, nb = len(points_a), len(points_b)
    n = na + nb + 1  # weights + t
    A_eq = [[1] * na + [0] * nb + [0], [0] * na + [1] * nb + [0]]
    b_eq = [1, 1]
    A_ub = []
    b_ub = []
    for i in range(k):
        pos = [p[i] for p in points_a] + [-q[i] for q in points_b] + [-1]
        neg = [-p[i] for p in points_a] + [q[i] for q in points_b] + [-1]
        A_ub.append(pos)
        b_ub.append(0)
        A_ub.append(neg)
        b_ub.append(0)
    c = [0] * (na + nb) + [1]
    status, x, value = solve_lp(c, A_eq, b_eq, A_ub, b_ub)
    if status != OPTIMAL:
        raise AssertionError("distance LP cannot be infeasible/unbounded")
    return value
