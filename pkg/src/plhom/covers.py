"""Open covers carried by open stars, and the good-cover machinery.

Open sets are realized as |P| minus a closed subcomplex, so membership,
frontier distance and all containment questions stay exactly decidable.
Cover elements are always open stars of vertices of a carrier subdivision;
finite intersections of such stars are again stars, which is what makes the
covers produced here good.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence

from .errors import (CapExceededError, IncompatibleCarriersError,
                     InvalidInputError, PreconditionError)
from .complexes import (Complex, SubcomplexRef, barycentric_subdivision,
                        carrier, closure_set, linf_diameter, open_star,
                        point_key, proper_faces, relocate_subcomplex,
                        star_of_vertex, subdivision_map)
from .linprog import linf_distance

DEFAULT_CAP = 20


class OpenRegion:
    """O = |base| minus |Q| for a closed subcomplex Q of a closed base."""

    def __init__(self, base: Complex, excluded: Optional[SubcomplexRef] = None):
        if not base.is_closed():
            raise InvalidInputError("region base must be a closed complex")
        if excluded is not None and excluded.parent != base:
            raise InvalidInputError("excluded subcomplex must live on the base")
        self.base = base
        self.excluded = excluded

    def excluded_members(self) -> frozenset:
        return self.excluded.members if self.excluded is not None else frozenset()

    def is_whole(self) -> bool:
        return not self.excluded_members()

    def contains(self, x) -> bool:
        return carrier(x, self.base) not in self.excluded_members()

    def frontier_distance(self, x):
        """L-infinity distance from x to |Q|; None when Q is empty."""
        if self.is_whole():
            return None
        best = None
        for q in self.excluded_members():
            d = linf_distance([tuple(x)], self.base.points_of(q))
            if best is None or d < best:
                best = d
        return best

    def __eq__(self, other):
        return (isinstance(other, OpenRegion) and self.base == other.base
                and self.excluded_members() == other.excluded_members())

    def __hash__(self):
        return hash((self.base, self.excluded_members()))


class CoverTag:
    """Provenance tag attached by the constructor that certifies it."""

    def __init__(self, kind: str, witness=None, chain=None):
        self.kind = kind  # plain | star-refining | semi-good | n-good | good
        self.witness = witness
        self.chain = chain or []

    def downgrade(self, n: int) -> "CoverTag":
        if self.kind != "n-good" or n < 1 or n > len(self.chain):
            raise InvalidInputError("can only downgrade an n-good tag within its chain")
        return CoverTag("n-good", self.witness, self.chain[-n:])


class StarCover:
    """Finite open cover whose elements are open stars in one carrier."""

    def __init__(self, carrier_complex: Complex, centers: Sequence, region: OpenRegion,
                 margin: Fraction = Fraction(0), tag: Optional[CoverTag] = None,
                 witness_data=None):
        self.carrier = carrier_complex
        self.centers = [tuple(c) for c in centers]
        self.region = region
        self.margin = Fraction(margin)
        self.tag = tag
        self.witness_data = witness_data
        self._elements = None
        if not self.centers:
            raise InvalidInputError("a star cover needs at least one element")

    def elements(self) -> List[frozenset]:
        if self._elements is None:
            self._elements = [open_star(c, self.carrier) for c in self.centers]
        return self._elements

    def element_contains_point(self, idx: int, x) -> bool:
        return carrier(x, self.carrier) in self.elements()[idx]

    def covering_element(self, x) -> Optional[int]:
        tau = carrier(x, self.carrier)
        for i, e in enumerate(self.elements()):
            if tau in e:
                return i
        return None

    def is_whole(self) -> bool:
        return False


class WholeRegionCover:
    """The trivial cover of a region by itself (one element, the region)."""

    def __init__(self, region: OpenRegion):
        self.region = region
        self.carrier = region.base
        self.margin = Fraction(0)
        self.tag = CoverTag("plain")

    def is_whole(self) -> bool:
        return True


def star_of(U: StarCover, A) -> List[int]:
    """Indices of all cover elements meeting A.

    A may be an element index, a set of carrier simplexes, or a list of
    points of the covered region.
    """
    elements = U.elements()
    if isinstance(A, int):
        target = elements[A]
    elif isinstance(A, (set, frozenset)):
        target = frozenset(A)
    else:
        target = frozenset(carrier(x, U.carrier) for x in A)
    return [i for i, e in enumerate(elements) if e & target]


# ---------------------------------------------------------------------------
# combinatorial containment across carriers
# ---------------------------------------------------------------------------

def _fine_to_coarse(fine: Complex, coarse: Complex) -> dict:
    try:
        return subdivision_map(fine, coarse)
    except Exception as exc:  # point location failed: carriers unrelated
        raise IncompatibleCarriersError(str(exc)) from exc


def open_set_in_element(mapping: dict, simplex_set: Iterable, element: frozenset) -> bool:
    """Union of fine open simplexes inside a coarse union of open simplexes."""
    return all(mapping[s] in element for s in simplex_set)


def closed_set_in_element(mapping: dict, simplexes: Iterable, element: frozenset) -> bool:
    """Union of fine *closed* simplexes inside a coarse open union."""
    for s in simplexes:
        if mapping[s] not in element:
            return False
        for f in proper_faces(s):
            if mapping[f] not in element:
                return False
    return True


def refine_check(U: StarCover, V, *, same_region: bool = True) -> dict:
    """Does U refine / star-refine V?  Decided combinatorially.

    The carriers must be subdivision-comparable (U finer or equal).
    """
    if isinstance(V, WholeRegionCover):
        return {"refines": True, "star_refines": True}
    if same_region and U.region != V.region:
        raise PreconditionError("covers do not cover the same region")
    mapping = _fine_to_coarse(U.carrier, V.carrier)
    u_elems = U.elements()
    v_elems = V.elements()
    refines = True
    for e in u_elems:
        if not any(open_set_in_element(mapping, e, ve) for ve in v_elems):
            refines = False
            break
    star_refines = True
    for i, e in enumerate(u_elems):
        star = set()
        for j in star_of(U, i):
            star |= u_elems[j]
        if not any(open_set_in_element(mapping, star, ve) for ve in v_elems):
            star_refines = False
            break
    return {"refines": refines, "star_refines": star_refines}


# ---------------------------------------------------------------------------
# distance bookkeeping for staged constructions
# ---------------------------------------------------------------------------

class _FrontierGauge:
    """Cached exact L-infinity distances from simplexes/vertices to |Q|."""

    def __init__(self, region: OpenRegion):
        self.region = region
        self.q_points = [region.base.points_of(q) for q in region.excluded_members()]
        self._cache = {}

    def empty(self) -> bool:
        return not self.q_points

    def point_dist(self, x):
        if self.empty():
            return None
        key = point_key(x)
        if key not in self._cache:
            self._cache[key] = min(linf_distance([tuple(x)], qp) for qp in self.q_points)
        return self._cache[key]

    def simplex_dist_at_least(self, P: Complex, s, r) -> bool:
        """Is the closed simplex at distance >= r from |Q|?  Exact."""
        if self.empty():
            return True
        pts = P.points_of(s)
        # upper bound: closest vertex
        if min(self.point_dist(p) for p in pts) < r:
            return False
        # bbox lower bound against each Q piece
        lo = [min(p[i] for p in pts) for i in range(P.ambient_dim)]
        hi = [max(p[i] for p in pts) for i in range(P.ambient_dim)]
        need_lp = []
        for qp in self.q_points:
            qlo = [min(p[i] for p in qp) for i in range(P.ambient_dim)]
            qhi = [max(p[i] for p in qp) for i in range(P.ambient_dim)]
            gap = None
            for i in range(P.ambient_dim):
                g = qlo[i] - hi[i]
                g2 = lo[i] - qhi[i]
                g = g if g > g2 else g2
                if gap is None or g > gap:
                    gap = g
            if gap is not None and gap >= r:
                continue
            need_lp.append(qp)
        for qp in need_lp:
            if linf_distance(pts, qp) < r:
                return False
        return True


# ---------------------------------------------------------------------------
# star refinement
# ---------------------------------------------------------------------------

def _vertex_in_region(K: Complex, v: int, region: OpenRegion, base_map: dict) -> bool:
    """Is carrier vertex v inside O?  Vertices of |Q| are excluded."""
    if region.is_whole():
        return True
    tau = base_map.get((v,))
    if tau is None:
        tau = carrier(K.verts[v], region.base)
    return tau not in region.excluded_members()

def _coverage_samples(K: Complex, region: OpenRegion, margin, gauge: _FrontierGauge):
    """Vertices and barycenters of the carrier lying in the declared region."""
    samples = []
    for v in range(len(K.verts)):
        samples.append(K.verts[v])
    for s in K.simplexes:
        if len(s) > 1:
            samples.append(K.barycenter(s))
    out = []
    for x in samples:
        tau = carrier(x, K)
        if not region.is_whole():
            pass
        d = gauge.point_dist(x)
        if d is None:
            if region.is_whole() or carrier(x, region.base) not in region.excluded_members():
                out.append(x)
        else:
            if d >= margin and d > 0:
                out.append(x)
    return out


def star_refinement(V, cap: int = DEFAULT_CAP) -> StarCover:
    """A star cover that star-refines V over the same region and margin.

    Subdivides V's carrier until the two-hop closed neighbourhood of enough
    vertices fits inside single V-elements; the constructive replacement for
    the paracompactness argument.
    """
    if isinstance(V, WholeRegionCover):
        raise InvalidInputError("star_refinement needs a concrete star cover")
    region = V.region
    gauge = _FrontierGauge(region)
    K = V.carrier
    for round_no in range(cap + 1):
        mapping = _fine_to_coarse(K, V.carrier)
        base_map = _fine_to_coarse(K, region.base)
        v_elems = V.elements()
        incident = {}
        for s in K.simplexes:
            for v in s:
                incident.setdefault(v, []).append(s)
        centers = []
        center_ids = []
        for v in range(len(K.verts)):
            if not _vertex_in_region(K, v, region, base_map):
                continue
            hop1 = set()
            for s in incident.get(v, ()):
                hop1.update(s)
            nbhd = set()
            for w in hop1:
                nbhd.update(incident.get(w, ()))
            ok = any(closed_set_in_element(mapping, nbhd, ve) for ve in v_elems)
            if ok:
                centers.append(K.verts[v])
                center_ids.append(v)
        if centers:
            W = StarCover(K, centers, region, V.margin,
                          CoverTag("star-refining", witness=V))
            if _covers_samples(W, gauge):
                return W
        K = barycentric_subdivision(K)
    raise CapExceededError("star refinement did not stabilize in %d rounds" % cap)


def _covers_samples(W: StarCover, gauge: _FrontierGauge) -> bool:
    region = W.region
    for x in _coverage_samples(W.carrier, region, W.margin, gauge):
        if W.covering_element(x) is None:
            return False
    return True


# ---------------------------------------------------------------------------
# semi-good and n-good refinements
# ---------------------------------------------------------------------------

def semi_good_refinement(V, region: Optional[OpenRegion] = None,
                         cap: int = DEFAULT_CAP) -> StarCover:
    """Refinement whose elements admit upstairs contractible extension witnesses.

    Each output element is the star of a carrier vertex w whose *closed* star
    fits inside a single V-element.  The upstairs open star of w then sits
    between st^-1(element) and st^-1(V-element), and being a star it is
    definably contractible toward w.
    """
    if region is None:
        region = V.region
    whole = isinstance(V, WholeRegionCover)
    gauge = _FrontierGauge(region)
    K = region.base if whole else V.carrier
    for round_no in range(cap + 1):
        base_map = _fine_to_coarse(K, region.base)
        mapping = None if whole else _fine_to_coarse(K, V.carrier)
        v_elems = None if whole else V.elements()
        centers = []
        witnesses = []
        for v in range(len(K.verts)):
            if not _vertex_in_region(K, v, region, base_map):
                continue
            closed_star = closure_set(star_of_vertex(K, v))
            if whole:
                centers.append(K.verts[v])
                witnesses.append({"center_vertex": v, "outer_element": None})
                continue
            found = None
            for j, ve in enumerate(v_elems):
                if closed_set_in_element(mapping, star_of_vertex(K, v), ve):
                    found = j
                    break
            if found is not None:
                centers.append(K.verts[v])
                witnesses.append({"center_vertex": v, "outer_element": found})
        if centers:
            margin = Fraction(0) if whole else V.margin
            W = StarCover(K, centers, region, margin,
                          CoverTag("semi-good", witness=V), witness_data=witnesses)
            if _covers_samples(W, gauge):
                return W
        K = barycentric_subdivision(K)
    raise CapExceededError("semi-good refinement did not stabilize in %d rounds" % cap)


def n_good_refinement(U, region: Optional[OpenRegion] = None, n: int = 1,
                      cap: int = DEFAULT_CAP) -> StarCover:
    """Iterate (star-refine, then semi-good) n times inside U.

    The recorded chain drives skeleton-by-skeleton upstairs extension over n
    dimensions: step k of the induction consumes the k-th triple from the
    inside out.
    """
    if n < 1:
        raise PreconditionError("n-good refinement needs n >= 1")
    if region is None:
        region = U.region
    chain = []
    cur = U
    for _ in range(n):
        if isinstance(cur, WholeRegionCover):
            W = semi_good_refinement(cur, region, cap)
            V = W  # the trivial cover star-refines itself through the region
            chain.append({"outer": cur, "star_ref": None, "semi_good": W})
        else:
            V = star_refinement(cur, cap)
            W = semi_good_refinement(V, region, cap)
            chain.append({"outer": cur, "star_ref": V, "semi_good": W})
        cur = W
    cur.tag = CoverTag("n-good", witness=U, chain=chain)
    return cur


# ---------------------------------------------------------------------------
# good covers (staged constructive version of the refinement proposition)
# ---------------------------------------------------------------------------

class GoodCover:
    """Output bundle of the staged construction."""

    def __init__(self, cover: StarCover, chain, target, stage: int):
        self.cover = cover
        self.chain = chain      # list of per-stage dicts
        self.target = target    # the star-refinement W of V actually used
        self.stage = stage


def good_cover(O: OpenRegion, V=None, stage: int = 1, cap: int = DEFAULT_CAP) -> GoodCover:
    """Finite-stage good cover of O refining V.

    Stage i secures the compact slab C_i = {x : dist(x, |Q|) >= 1/i}:
    the carrier is subdivided (holding the previous stage's subcomplex
    fixed) until every simplex touching the slab's vertex set fits in an
    element of the star-refinement W of V, or hugs the held subcomplex
    within the stage tolerance.  Cover elements are the open stars of the
    final subcomplex's vertices, so all finite intersections are stars.
    """
    if stage < 1:
        raise PreconditionError("stage must be >= 1")
    gauge = _FrontierGauge(O)
    if V is None or isinstance(V, WholeRegionCover):
        W = None
        K = barycentric_subdivision(O.base)  # the proof's initial fine complex
    else:
        W = star_refinement(V, cap)
        K = barycentric_subdivision(W.carrier)
    chain = []
    L_prev = None  # SubcomplexRef on the carrier it was built on
    for i in range(1, stage + 1):
        r_i = Fraction(1, i)
        tol_i = _stage_tolerance(i, K, L_prev, W, O, gauge)
        for attempt in range(cap + 1):
            held = relocate_subcomplex(L_prev, K) if L_prev is not None else None
            ok = _stage_satisfied(K, O, gauge, r_i, W, held, tol_i)
            if ok:
                break
            K = barycentric_subdivision(K, held)
        else:
            raise CapExceededError("good cover stage %d exceeded %d rounds" % (i, cap))
        members = _slab_subcomplex(K, gauge, r_i)
        L_i = SubcomplexRef(K, members)
        if L_prev is not None:
            prev_here = relocate_subcomplex(L_prev, K)
            if not prev_here.members <= L_i.members:
                raise AssertionError("stage chain is not nested")
        chain.append({"carrier": K, "subcomplex": L_i, "radius": r_i, "tolerance": tol_i})
        L_prev = L_i
    centers = []
    for v in sorted(L_prev.vertex_ids()):
        if (v,) in L_prev.members:
            centers.append(K.verts[v])
    if not centers:
        raise PreconditionError("no covered vertices at stage %d; region too thin" % stage)
    cover = StarCover(K, centers, O, Fraction(1, stage),
                      CoverTag("good", witness=V))
    return GoodCover(cover, chain, W, stage)


def _slab_subcomplex(K: Complex, gauge: _FrontierGauge, r) -> set:
    if gauge.empty():
        return set(K.simplexes)
    out = set()
    for s in K.simplexes:
        if gauge.simplex_dist_at_least(K, s, r):
            out.add(s)
    return out


def _stage_tolerance(i, K, L_prev, W, O, gauge):
    """Tolerance for the hug-the-held-subcomplex escape clause.

    Chosen so that the tolerance neighbourhood of every held simplex still
    fits in a target-cover element, mirroring the proof's choice of eps_i.
    """
    if L_prev is None:
        return None
    tol = Fraction(1, i) - Fraction(1, i + 1)
    if W is None:
        return tol
    mapping = _fine_to_coarse(L_prev.parent, W.carrier)
    for m in L_prev.members:
        best = None
        pts = L_prev.parent.points_of(m)
        for e_idx, elem in enumerate(W.elements()):
            if not closed_set_in_element(mapping, [m], elem):
                continue
            comp = [s for s in W.carrier.simplexes if s not in elem]
            room = None
            for s in comp:
                d = linf_distance(pts, W.carrier.points_of(s))
                if room is None or d < room:
                    room = d
            if room is not None and (best is None or room > best):
                best = room
        if best is not None and best / 2 < tol:
            tol = best / 2
    return tol


def _simplex_within_tol_of(P: Complex, s, L: SubcomplexRef, tol) -> bool:
    """Whole closed simplex within tol of a *single* held closed simplex."""
    pts = P.points_of(s)
    for m in L.members:
        mp = L.parent.points_of(m)
        far = None
        for p in pts:
            d = linf_distance([p], mp)
            if far is None or d > far:
                far = d
        if far is not None and far <= tol:
            return True
    return False


def _stage_satisfied(K, O, gauge, r_i, W, held, tol_i) -> bool:
    # vertices inside the slab
    vert_in = {}
    for v in range(len(K.verts)):
        d = gauge.point_dist(K.verts[v])
        vert_in[v] = True if d is None else d >= r_i
    mapping = _fine_to_coarse(K, W.carrier) if W is not None else None
    w_elems = W.elements() if W is not None else None
    q = O.excluded_members()
    base_map = _fine_to_coarse(K, O.base) if q else None
    for s in K.simplexes:
        if not any(vert_in[v] for v in s):
            continue
        if W is None:
            # target cover is the whole region: need cl(s) inside O
            inside = True
            if q:
                if base_map[s] in q:
                    inside = False
                else:
                    for f in proper_faces(s):
                        if base_map[f] in q:
                            inside = False
                            break
            if inside:
                continue
        else:
            if any(closed_set_in_element(mapping, [s], e) for e in w_elems):
                continue
        if held is not None and tol_i is not None and \
                _simplex_within_tol_of(K, s, held, tol_i):
            continue
        return False
    return True
