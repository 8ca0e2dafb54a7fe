"""Geometric simplicial complexes with exact coordinates.

A complex is a finite set of *open* simplexes: two closures meet in the
closure of a common face or not at all.  The same combinatorial object can
be realized downstairs (Fraction coordinates) or upstairs (InfScalar
coordinates over Q(eps)); every query below works over either field.

Vertices are canonically numbered by the lexicographic order of their
serialized coordinates, which makes subdivisions, prisms and all emitted
certificates reproducible byte for byte.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import (InvalidInputError, NotInRealizationError,
                     UnsupportedRealizationError)
from .field import InfScalar, scalar_to_str
from .linalg import affine_rank, solve_linear
from .linprog import hulls_intersect, linf_distance, max_hull_weight

UPSTAIRS = "upstairs"
DOWNSTAIRS = "downstairs"

Simplex = tuple  # tuple of vertex indices, strictly increasing


def _cast_coord(value, realization):
    if realization == DOWNSTAIRS:
        if isinstance(value, InfScalar):
            raise InvalidInputError("InfScalar coordinate in a downstairs complex")
        return Fraction(value)
    return value if isinstance(value, InfScalar) else InfScalar.from_rational(value)


def point_key(point) -> tuple:
    return tuple(scalar_to_str(c) for c in point)


class Complex:
    """Immutable geometric simplicial complex."""

    def __init__(self, points: Sequence[Sequence], simplexes: Iterable[Sequence[int]],
                 realization: str = DOWNSTAIRS, ambient_dim: Optional[int] = None):
        if realization not in (UPSTAIRS, DOWNSTAIRS):
            raise InvalidInputError("unknown realization %r" % realization)
        pts = [tuple(_cast_coord(c, realization) for c in p) for p in points]
        if not pts:
            raise InvalidInputError("empty complexes are rejected")
        k = ambient_dim if ambient_dim is not None else len(pts[0])
        for p in pts:
            if len(p) != k:
                raise InvalidInputError("inconsistent ambient dimension")
        # canonical vertex order: lexicographic on serialized coordinates
        keyed = sorted(set(point_key(p) for p in pts))
        index_of = {key: i for i, key in enumerate(keyed)}
        by_key = {point_key(p): p for p in pts}
        self.verts = tuple(by_key[key] for key in keyed)
        self.realization = realization
        self.ambient_dim = k
        old_to_new = {}
        for old, p in enumerate(pts):
            old_to_new[old] = index_of[point_key(p)]
        simps = set()
        for s in simplexes:
            t = tuple(sorted(old_to_new[v] for v in s))
            if len(set(t)) != len(t):
                raise InvalidInputError("simplex with repeated vertices %r" % (s,))
            simps.add(t)
        if not simps:
            raise InvalidInputError("complex without simplexes")
        for t in simps:
            for v in t:
                if not 0 <= v < len(self.verts):
                    raise InvalidInputError("simplex references missing vertex")
        self.simplexes = frozenset(simps)
        self._carrier_cache = {}
        # optional subdivision provenance: (parent complex, {simplex: parent simplex})
        self.provenance = None

    # -- basic structure ----------------------------------------------------

    def dim(self) -> int:
        return max(len(s) for s in self.simplexes) - 1

    def points_of(self, s: Simplex):
        return [self.verts[v] for v in s]

    def is_closed(self) -> bool:
        for s in self.simplexes:
            for f in proper_faces(s):
                if f not in self.simplexes:
                    return False
        return True

    def top_simplexes(self):
        """Simplexes that are not a proper face of another simplex."""
        tops = []
        for s in self.simplexes:
            if not any(s != t and set(s) <= set(t) for t in self.simplexes):
                tops.append(s)
        return tops

    def barycenter(self, s: Simplex):
        pts = self.points_of(s)
        n = len(pts)
        inv = Fraction(1, n)
        return tuple(sum(p[i] for p in pts) * inv for i in range(self.ambient_dim))

    def zero(self):
        return Fraction(0) if self.realization == DOWNSTAIRS else InfScalar.from_rational(0)

    def __eq__(self, other):
        return (isinstance(other, Complex)
                and self.realization == other.realization
                and self.ambient_dim == other.ambient_dim
                and self.verts == other.verts
                and self.simplexes == other.simplexes)

    def __hash__(self):
        return hash((self.realization, self.ambient_dim, self.verts, self.simplexes))

    def __repr__(self):
        return "Complex(%s, %d verts, %d simps, dim %d)" % (
            self.realization, len(self.verts), len(self.simplexes), self.dim())


class SubcomplexRef:
    """A subset of a parent complex's simplexes forming a complex."""

    def __init__(self, parent: Complex, members: Iterable[Simplex], closed: bool = True):
        self.parent = parent
        self.members = frozenset(tuple(m) for m in members)
        for m in self.members:
            if m not in parent.simplexes:
                raise InvalidInputError("subcomplex member not in parent")
        if closed:
            for m in self.members:
                for f in proper_faces(m):
                    if f not in self.members:
                        raise InvalidInputError("subcomplex not closed under faces")
        self.closed = closed

    def __contains__(self, s):
        return tuple(s) in self.members

    def vertex_ids(self):
        out = set()
        for m in self.members:
            out.update(m)
        return out


def proper_faces(s: Simplex):
    """All nonempty proper faces of a simplex (as sorted index tuples)."""
    for r in range(1, len(s)):
        for c in itertools.combinations(s, r):
            yield c


def closure_set(simplexes) -> frozenset:
    out = set()
    for s in simplexes:
        out.add(tuple(s))
        out.update(proper_faces(tuple(s)))
    return frozenset(out)


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def _bbox(points):
    lo = [min(p[i] for p in points) for i in range(len(points[0]))]
    hi = [max(p[i] for p in points) for i in range(len(points[0]))]
    return lo, hi


def _bbox_disjoint(a, b) -> bool:
    (alo, ahi), (blo, bhi) = a, b
    for i in range(len(alo)):
        if ahi[i] < blo[i] or bhi[i] < alo[i]:
            return True
    return False


def validate_complex(C: Complex) -> dict:
    """Check affine independence and the pairwise closure-intersection rule.

    Report-valued: every violating simplex or pair is listed.
    """
    affine_failures = []
    for s in C.simplexes:
        pts = C.points_of(s)
        if affine_rank(pts) != len(pts) - 1:
            affine_failures.append(s)
    pair_failures = []
    simps = sorted(C.simplexes, key=lambda s: (len(s), s))
    boxes = {s: _bbox(C.points_of(s)) for s in simps}
    for i, s in enumerate(simps):
        for t in simps[i + 1:]:
            shared = tuple(sorted(set(s) & set(t)))
            if set(shared) == set(s) or set(shared) == set(t):
                continue  # face relation, intersection is the smaller closure
            if _bbox_disjoint(boxes[s], boxes[t]):
                if shared:
                    pair_failures.append((s, t, "shared vertices but disjoint boxes"))
                continue
            ps, pt = C.points_of(s), C.points_of(t)
            if not shared:
                if hulls_intersect(ps, pt):
                    pair_failures.append((s, t, "closures meet with no common face"))
                continue
            if shared not in C.simplexes:
                pair_failures.append((s, t, "shared span not a simplex of the complex"))
                continue
            ok = True
            for idx, v in enumerate(s):
                if v in shared:
                    continue
                w = max_hull_weight(ps, pt, idx)
                if w is not None and w > 0:
                    ok = False
                    break
            if ok:
                for idx, v in enumerate(t):
                    if v in shared:
                        continue
                    w = max_hull_weight(pt, ps, idx)
                    if w is not None and w > 0:
                        ok = False
                        break
            if not ok:
                pair_failures.append((s, t, "intersection exceeds the shared face"))
    return {
        "valid": not affine_failures and not pair_failures,
        "closed": C.is_closed(),
        "affine_failures": affine_failures,
        "pair_failures": pair_failures,
    }


# ---------------------------------------------------------------------------
# subdivisions and prisms
# ---------------------------------------------------------------------------

def barycentric_subdivision(P: Complex, hold: Optional[SubcomplexRef] = None) -> Complex:
    """Barycentric subdivision of a closed complex, holding ``hold`` fixed.

    Every held simplex survives unchanged; every other simplex is coned from
    its barycenter over its already-subdivided boundary, by increasing
    dimension.  |P'| = |P| pointwise and each new simplex sits inside exactly
    one simplex of P.
    """
    if not P.is_closed():
        raise InvalidInputError("barycentric subdivision needs a closed complex")
    held = frozenset()
    if hold is not None:
        if hold.parent is not P and hold.parent != P:
            raise InvalidInputError("hold subcomplex belongs to a different complex")
        if not hold.closed:
            raise InvalidInputError("hold subcomplex must be closed")
        held = hold.members
    # pieces[s] = set of new open simplexes (as tuples of points) refining s
    pieces = {}
    for s in sorted(P.simplexes, key=len):
        spts = tuple(P.points_of(s))
        if s in held or len(s) == 1:
            pieces[s] = {tuple(spts)}
            continue
        b = P.barycenter(s)
        new = {(b,)}
        for f in proper_faces(s):
            for piece in pieces[f]:
                new.add((b,) + piece)
        pieces[s] = new
    all_points = []
    all_simplexes = []
    pindex = {}

    def idx(pt):
        key = point_key(pt)
        if key not in pindex:
            pindex[key] = len(all_points)
            all_points.append(pt)
        return pindex[key]

    origin = []
    for s in P.simplexes:
        for piece in pieces[s]:
            all_simplexes.append([idx(p) for p in piece])
            origin.append(s)
    out = Complex(all_points, all_simplexes, P.realization, P.ambient_dim)
    key_to_new = {point_key(p): i for i, p in enumerate(out.verts)}
    prov = {}
    for raw, s in zip(all_simplexes, origin):
        t = tuple(sorted(key_to_new[point_key(all_points[v])] for v in raw))
        prov[t] = s
    out.provenance = (P, prov)
    return out


def iterated_subdivision(P: Complex, rounds: int, hold: Optional[SubcomplexRef] = None) -> Complex:
    """Iterate barycentric subdivision; a held subcomplex is re-located by
    coordinates after each round (its simplexes survive unchanged)."""
    for _ in range(rounds):
        h = None
        if hold is not None:
            h = relocate_subcomplex(hold, P)
        P = barycentric_subdivision(P, h)
    return P


def relocate_subcomplex(sub: SubcomplexRef, Q: Complex) -> SubcomplexRef:
    """Find ``sub``'s simplexes inside another complex by vertex coordinates."""
    key_to_idx = {point_key(p): i for i, p in enumerate(Q.verts)}
    members = []
    for m in sub.members:
        try:
            t = tuple(sorted(key_to_idx[point_key(sub.parent.verts[v])] for v in m))
        except KeyError as exc:
            raise InvalidInputError("subcomplex vertex missing from target complex") from exc
        if t not in Q.simplexes:
            raise InvalidInputError("subcomplex simplex missing from target complex")
        members.append(t)
    return SubcomplexRef(Q, members, closed=sub.closed)


def prism_triangulation(P: Complex) -> Complex:
    """Standard triangulation of |P| x [0,1].

    For each simplex [v0..vn] (canonical vertex order) the prism is cut into
    the n+1 simplexes [v0^0..vi^0, vi^1..vn^1]; faces are closed up so the
    result is again a closed complex containing P x {0} and P x {1}.
    """
    if not P.is_closed():
        raise InvalidInputError("prism triangulation needs a closed complex")
    zero = P.zero()
    one = zero + 1
    pts = []
    index = {}

    def idx(v, level):
        key = (v, level)
        if key not in index:
            index[key] = len(pts)
            pts.append(tuple(P.verts[v]) + ((zero,) if level == 0 else (one,)))
        return index[key]

    tops = []
    for s in P.simplexes:
        n = len(s) - 1
        for i in range(n + 1):
            bottom = [idx(v, 0) for v in s[:i + 1]]
            top = [idx(v, 1) for v in s[i:]]
            tops.append(bottom + top)
    simps = set()
    for t in tops:
        t = tuple(sorted(t))
        simps.add(t)
        simps.update(proper_faces(t))
    return Complex(pts, simps, P.realization, P.ambient_dim + 1)


def prism_end(T: Complex, P: Complex, level: int) -> dict:
    """Vertex map of the end P x {level} inside a prism complex T.

    Returns {prism vertex id -> base vertex id}; raises when an end vertex
    is missing (the ends must have survived any subdivision unchanged).
    """
    zero = P.zero()
    want = zero + level
    key_to_base = {point_key(p): i for i, p in enumerate(P.verts)}
    out = {}
    for i, p in enumerate(T.verts):
        if p[-1] == want:
            key = point_key(p[:-1])
            if key in key_to_base:
                out[i] = key_to_base[key]
    return out


# ---------------------------------------------------------------------------
# point location and stars
# ---------------------------------------------------------------------------

def barycentric_coords(P: Complex, s: Simplex, x) -> Optional[list]:
    """Exact barycentric coordinates of x in the closed simplex s, or None."""
    pts = P.points_of(s)
    k = P.ambient_dim
    one = P.zero() + 1
    A = [[p[i] for p in pts] for i in range(k)]
    A.append([one] * len(pts))
    b = list(x) + [one]
    sol = solve_linear(A, b)
    if sol is None:
        return None
    # the system solution may be affine-hull only; verify exactly
    for i in range(k):
        acc = 0
        for lam, p in zip(sol, pts):
            acc = acc + lam * p[i]
        if acc != x[i]:
            return None
    return sol


def carrier(x, P: Complex) -> Simplex:
    """The unique open simplex of P containing x."""
    key = point_key(x)
    cached = P._carrier_cache.get(key)
    if cached is not None:
        return cached
    for s in sorted(P.simplexes, key=lambda s: (len(s), s)):
        lo, hi = _bbox(P.points_of(s))
        if any(x[i] < lo[i] or x[i] > hi[i] for i in range(P.ambient_dim)):
            continue
        lam = barycentric_coords(P, s, x)
        if lam is not None and all(l > 0 for l in lam):
            P._carrier_cache[key] = s
            return s
    raise NotInRealizationError("point lies outside the realization")


def point_in_realization(x, P: Complex) -> bool:
    try:
        carrier(x, P)
        return True
    except NotInRealizationError:
        return False


def open_star(x, P: Complex) -> frozenset:
    """All open simplexes whose closure contains x (Def. of the open star)."""
    tau = carrier(x, P)
    return frozenset(s for s in P.simplexes if set(tau) <= set(s))


def star_of_vertex(P: Complex, v: int) -> frozenset:
    return frozenset(s for s in P.simplexes if v in s)


def star_complement(P: Complex, star: frozenset) -> frozenset:
    """The closed subcomplex realizing |P| minus the union of the star."""
    return frozenset(s for s in P.simplexes if s not in star)


def star_intersection(x, y, P: Complex):
    """Witness point z with St(x) cap St(y) = St(z), or None when empty."""
    sx = open_star(x, P)
    sy = open_star(y, P)
    inter = sx & sy
    if not inter:
        return None
    smin = min(inter, key=lambda s: (len(s), s))
    z = P.barycenter(smin)
    if open_star(z, P) != inter:
        raise AssertionError("star intersection is not a star (complex invalid?)")
    return z


# ---------------------------------------------------------------------------
# metrics
# ---------------------------------------------------------------------------

def linf_diameter(points):
    best = None
    for p, q in itertools.combinations(points, 2):
        for i in range(len(p)):
            d = p[i] - q[i]
            if d < 0:
                d = -d
            if best is None or d > best:
                best = d
    return best


def mesh(P: Complex):
    """Max L-infinity diameter over closed simplexes (attained at vertices)."""
    best = P.zero()
    for s in P.simplexes:
        if len(s) < 2:
            continue
        d = linf_diameter(P.points_of(s))
        if d > best:
            best = d
    return best


def min_distance(P: Complex, A: Iterable[Simplex], B: Iterable[Simplex]):
    """Exact min L-infinity distance between two sets of closed simplexes.

    Downstairs only: the exact rational LP is all the artifact needs, and
    upstairs distances are never used by the pipelines.
    """
    if P.realization != DOWNSTAIRS:
        raise UnsupportedRealizationError("exact distances are downstairs-only")
    A = list(A)
    B = list(B)
    if not A or not B:
        raise InvalidInputError("min_distance needs nonempty simplex sets")
    best = None
    for a in A:
        pa = P.points_of(a)
        for b in B:
            d = linf_distance(pa, P.points_of(b))
            if best is None or d < best:
                best = d
            if best == 0:
                return best
    return best


def point_set_distance(P: Complex, x, B: Iterable[Simplex]):
    """Distance from a single point to a set of closed simplexes."""
    best = None
    for b in B:
        d = linf_distance([tuple(x)], P.points_of(b))
        if best is None or d < best:
            best = d
    return best


def skeleton(P: Complex, k: int) -> SubcomplexRef:
    """All simplexes of dimension <= k."""
    return SubcomplexRef(P, [s for s in P.simplexes if len(s) <= k + 1],
                         closed=P.is_closed())


# ---------------------------------------------------------------------------
# containment of hulls in unions of open simplexes
# ---------------------------------------------------------------------------

def hull_in_open_union(P: Complex, hull_points, member_set: frozenset) -> bool:
    """Is conv(hull_points) inside the union of the given open simplexes?

    The union's complement in |P| is the closed subcomplex of non-members,
    so containment holds iff the hull misses every maximal non-member.
    The hull must already be known to lie inside |P|.
    """
    complement = [s for s in P.simplexes if s not in member_set]
    # maximal complement simplexes suffice
    comp_sets = [set(s) for s in complement]
    hull_box = _bbox(hull_points)
    for i, s in enumerate(complement):
        if any(j != i and comp_sets[i] < comp_sets[j] for j in range(len(complement))):
            continue
        pts = P.points_of(s)
        if _bbox_disjoint(hull_box, _bbox(pts)):
            continue
        if hulls_intersect(hull_points, pts):
            return False
    return True


def fine_simplex_coarse_carrier(fine: Complex, s: Simplex, coarse: Complex) -> Simplex:
    """The unique coarse open simplex containing a fine simplex's interior."""
    return carrier(fine.barycenter(s), coarse)


def subdivision_map(fine: Complex, coarse: Complex) -> dict:
    """Map each fine simplex to the unique coarse simplex containing it.

    Follows recorded subdivision provenance when available, otherwise locates
    barycenters exactly.  Raises when the complexes are not comparable.
    """
    if fine is coarse or fine == coarse:
        return {s: s for s in fine.simplexes}
    mapping = {s: s for s in fine.simplexes}
    cur = fine
    while cur.provenance is not None:
        parent, prov = cur.provenance
        mapping = {s: prov[t] for s, t in mapping.items()}
        if parent is coarse or parent == coarse:
            return mapping
        cur = parent
    # fall back to exact point location
    return {s: fine_simplex_coarse_carrier(fine, s, coarse) for s in fine.simplexes}
