"""Query-time regions around the two query points.

Around ``s`` (per quadrant) we build the *gateway region* ``R(s)``: an
axis-parallel staircase-shaped region anchored at ``s1`` whose ceiling
carries the cut-line gateways of ``s`` ordered outward.  Around ``t`` we
build the *extended gateway region* ``R(t)``: per quadrant, an R(s)-style
core enlarged by staircase regions between consecutive gateways, the
corner rectangle down to the horizontal line through ``t``, and two end
caps bounded by the polygon edges hit by ``t``'s axis projections.  The
caps may contribute up to two *special gateways* per quadrant (boundary
points taken from the polygon-vertex/projection point set).

Boundary pieces of ``R(t)`` not lying on polygon edges are *transparent
edges*: any path from outside to ``t`` crosses one, and each transparent
edge stores an endpoint gateway through which an xy-monotone detour to
``t`` exists.

All region geometry is computed in a canonical per-quadrant frame that
reflects the owning quadrant onto the first quadrant, so a single code
path serves all four quadrants.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from .geom import (
    DOWN,
    LEFT,
    NotInStaircasePosition,
    Point,
    PolygonalDomain,
    PreconditionViolated,
    RIGHT,
    UP,
    axis_projection,
    is_visible,
    is_xy_monotone,
    l1,
    norm,
    on_segment,
    point_in_ring,
)
from .graph import PathGraph


# ---------------------------------------------------------------------------
# quadrant frames

@dataclass(frozen=True)
class Frame:
    """Reflection taking one quadrant of the plane onto the first quadrant.

    Canonical coordinates are (sx*x, sy*y); the map is an involution and
    an L1 isometry, so distances computed in either system agree.
    """

    quadrant: int
    sx: int
    sy: int

    def to_canon(self, p: Point) -> Point:
        return Point(norm(self.sx * p.x), norm(self.sy * p.y))

    from_canon = to_canon  # involution

    @property
    def right(self) -> str:
        return RIGHT if self.sx > 0 else LEFT

    @property
    def left(self) -> str:
        return LEFT if self.sx > 0 else RIGHT

    @property
    def up(self) -> str:
        return UP if self.sy > 0 else DOWN


FRAMES: Dict[int, Frame] = {
    1: Frame(1, 1, 1),
    2: Frame(2, -1, 1),
    3: Frame(3, -1, -1),
    4: Frame(4, 1, -1),
}


# ---------------------------------------------------------------------------
# gateway region R(s)

def prune_trailing_equal_y(points: Sequence) -> list:
    """Truncate the last maximal equal-y run to its first element.

    ``points`` are (payload, canonical Point) pairs sorted by x with
    non-increasing y; any shortest path through a dropped gateway also
    passes through the kept one.
    """
    pts = list(points)
    if not pts:
        return pts
    y_last = pts[-1][1].y
    i = len(pts) - 1
    while i > 0 and pts[i - 1][1].y == y_last:
        i -= 1
    return pts[: i + 1]


@dataclass
class GatewayRegionS:
    """The staircase-shaped gateway region of one quadrant of s."""

    frame: Frame
    anchor: Point                 # s1, canonical
    gateways: tuple               # canonical points p1..pk (pruned)
    gids: tuple                   # aligned graph ids
    ceiling: tuple                # canonical polyline p1, p2', p2, ..., pk

    @property
    def k(self) -> int:
        return len(self.gateways)

    @property
    def degenerate(self) -> bool:
        return self.k == 1

    @property
    def bottom_segment(self):
        """Canonical bottom boundary: s1 -> p_k' (horizontal)."""
        if self.degenerate:
            return (self.anchor, self.anchor)
        pk_prime = Point(self.gateways[-2].x, self.gateways[-1].y)
        return (self.anchor, pk_prime)

    @property
    def left_segment(self):
        """Canonical left boundary: s1 -> p_2' (vertical)."""
        if self.degenerate:
            return (self.anchor, self.gateways[0])
        p2_prime = Point(self.gateways[0].x, self.gateways[1].y)
        return (self.anchor, p2_prime)

    def ceiling_distance(self, i: int, j: int):
        """d(p_i, p_j) along the xy-monotone ceiling = L1 of the endpoints."""
        return l1(self.gateways[i], self.gateways[j])

    def boundary_canon(self) -> tuple:
        """Closed boundary ring (canonical)."""
        return (self.anchor,) + self.ceiling

    def _ceiling_y(self, x, strict: bool):
        """Ceiling height above abscissa x; strict picks the interior limit
        at step abscissas."""
        for p in self.gateways:
            if (p.x > x) if strict else (p.x >= x):
                return p.y
        return None

    def contains_canon(self, p: Point) -> bool:
        """Closed containment (ceiling included)."""
        if self.degenerate:
            return p.x == self.anchor.x and \
                self.anchor.y <= p.y <= self.gateways[0].y
        if not (self.gateways[0].x <= p.x <= self.gateways[-1].x):
            return False
        if p.y < self.anchor.y:
            return False
        top = self._ceiling_y(p.x, strict=False)
        return top is not None and p.y <= top

    def interior_contains_canon(self, p: Point) -> bool:
        """Open containment: excludes the ceiling and all boundary edges."""
        if self.degenerate:
            return False
        if not (self.gateways[0].x < p.x < self.gateways[-1].x):
            return False
        if p.y <= self.anchor.y:
            return False
        top = self._ceiling_y(p.x, strict=True)
        return top is not None and p.y < top


class DegenerateSlice(PreconditionViolated):
    """Raised never by build_region_s (k=1 is legal) — kept for API parity."""


def build_region_s(domain: PolygonalDomain, frame: Frame,
                   pruned: Sequence) -> GatewayRegionS:
    """Assemble R(s) from a pruned gateway slice.

    ``pruned`` holds (graph id, canonical Point) pairs sorted by x
    ascending with y non-increasing and the trailing equal-y run already
    truncated (see prune_trailing_equal_y).
    """
    if not pruned:
        raise PreconditionViolated("empty gateway slice")
    gids = tuple(g for g, _ in pruned)
    pts = tuple(p for _, p in pruned)
    anchor = Point(pts[0].x, pts[-1].y)
    ceiling: List[Point] = [pts[0]]
    for prev, cur in zip(pts, pts[1:]):
        p_prime = Point(prev.x, cur.y)
        if p_prime != ceiling[-1]:
            ceiling.append(p_prime)
        ceiling.append(cur)
    return GatewayRegionS(frame=frame, anchor=anchor, gateways=pts,
                          gids=gids, ceiling=tuple(ceiling))


def validate_region_s(domain: PolygonalDomain,
                      region: GatewayRegionS) -> bool:
    """Geometric validity: boundary in the domain, interior vertex-free,
    consecutive gateways in staircase positions."""
    frame = region.frame
    ring = region.boundary_canon()
    reals = [frame.from_canon(p) for p in ring]
    for a, b in zip(reals, reals[1:] + reals[:1]):
        if a != b and not is_visible(domain, a, b):
            return False
    for v in domain.vertices:
        if region.interior_contains_canon(frame.to_canon(v)):
            return False
    for a, b in zip(region.gateways, region.gateways[1:]):
        try:
            build_staircase(domain, frame, frame.from_canon(a),
                            frame.from_canon(b))
        except NotInStaircasePosition:
            return False
    return True


# ---------------------------------------------------------------------------
# staircase primitives

@dataclass
class StaircaseRegion:
    """Staircase path and region between a (northwest) and b."""

    frame: Frame
    a: Point                  # canonical
    b: Point                  # canonical
    path: tuple               # canonical polyline a .. b
    region: tuple             # canonical simple polygon ring
    kind: str                 # "2seg" | "3seg" | "flat"

    def path_real(self) -> tuple:
        return tuple(self.frame.from_canon(p) for p in self.path)


def build_staircase(domain: PolygonalDomain, frame: Frame, a_real: Point,
                    b_real: Point) -> StaircaseRegion:
    """Staircase path between two points, a northwest of b (canonically).

    Two segments when the rightward ray of a crosses the upward ray of b;
    three segments when both projections land on one polygon edge.
    """
    a = frame.to_canon(a_real)
    b = frame.to_canon(b_real)
    if not (a.x <= b.x and a.y >= b.y):
        raise NotInStaircasePosition("a is not northwest of b")
    if a == b:
        return StaircaseRegion(frame, a, b, (a,), (a,), "flat")
    if a.y == b.y:
        return StaircaseRegion(frame, a, b, (a, b), (a, b), "flat")
    if a.x == b.x:
        return StaircaseRegion(frame, a, b, (a, b), (a, b), "flat")
    ar_real, ar_edge = _max_projection(domain, a_real, frame.right)
    bu_real, bu_edge = _max_projection(domain, b_real, frame.up)
    ar = frame.to_canon(ar_real)
    bu = frame.to_canon(bu_real)
    corner = Point(b.x, a.y)
    q = Point(a.x, b.y)
    if ar.x >= b.x and bu.y >= a.y:
        path = (a, corner, b)
        region = (q, a, corner, b)
        kind = "2seg"
    elif _common_edge(domain, ar_edge, bu_edge, ar_real, bu_real):
        path = tuple(p for i, p in enumerate((a, ar, bu, b))
                     if i == 0 or p != (a, ar, bu, b)[i - 1])
        region = (q,) + path
        kind = "3seg"
    elif _point_on_edge(domain, bu_edge, a_real):
        # a itself sits on the edge containing b's projection; the leading
        # horizontal piece of the three-segment path is empty
        path = (a, bu, b) if bu not in (a, b) else (a, b)
        region = (q,) + path
        kind = "3seg"
    elif _point_on_edge(domain, ar_edge, b_real):
        path = (a, ar, b) if ar not in (a, b) else (a, b)
        region = (q,) + path
        kind = "3seg"
    else:
        raise NotInStaircasePosition(
            f"projections do not meet: {a_real} vs {b_real}")
    return StaircaseRegion(frame, a, b, path, region, kind)


def _max_projection(domain: PolygonalDomain, p: Point, direction):
    """Axis projection continued past grazed vertices.

    A ray that touches a vertex whose incident edges both lie on one side
    stops there under the conservative projection rule, but the segment
    through the vertex stays inside the closed domain; for staircase
    construction the full reach is the relevant one.
    """
    cur, edge = axis_projection(domain, p, direction)
    for _ in range(len(domain.vertices)):
        nxt, nxt_edge = axis_projection(domain, cur, direction)
        if nxt == cur:
            break
        cur, edge = nxt, nxt_edge
    return cur, edge


def _boundary_chains(domain: PolygonalDomain, start_edge: int,
                     goal_edge: int) -> list:
    """Candidate polygon-vertex chains between two boundary edges of the
    same ring, one per walk direction (empty when the edges coincide or
    lie on different rings)."""
    es, eg = domain.edges[start_edge], domain.edges[goal_edge]
    if es.ring != eg.ring:
        return []
    if start_edge == goal_edge:
        return [[]]
    ring = [e for e in domain.edges if e.ring == es.ring]
    pos = {e.index: k for k, e in enumerate(ring)}
    n = len(ring)
    out = []
    for step, corner in ((1, "b"), (-1, "a")):
        chain, k = [], pos[start_edge]
        for _ in range(n):
            chain.append(getattr(ring[k], corner))
            k = (k + step) % n
            if ring[k].index == goal_edge:
                out.append(chain)
                break
    return out


def _roof_walk(domain: PolygonalDomain, frame: Frame, a_real: Point,
               a_edge: int, b_real: Point, b_edge: int,
               axis: str = "x") -> list:
    """Canonical polygon vertices along the boundary from a to b, chosen as
    the walk direction whose vertices stay in the coordinate range spanned
    by the two endpoints along the given axis."""
    a = frame.to_canon(a_real)
    b = frame.to_canon(b_real)
    key = (lambda p: p.x) if axis == "x" else (lambda p: p.y)
    lo, hi = min(key(a), key(b)), max(key(a), key(b))
    for chain in _boundary_chains(domain, a_edge, b_edge):
        canon = [frame.to_canon(p) for p in chain]
        if all(lo <= key(c) <= hi for c in canon):
            return canon
    raise PreconditionViolated("no monotone boundary walk between "
                               f"{a_real} and {b_real}")


def _edge_at_y(e, y) -> Point:
    """Point of a non-horizontal edge at ordinate y."""
    s = Fraction(y - e.a.y, e.b.y - e.a.y)
    return Point(norm(e.a.x + s * (e.b.x - e.a.x)), norm(y))


def _point_on_edge(domain: PolygonalDomain, edge_idx: int, p: Point) -> bool:
    e = domain.edges[edge_idx]
    return on_segment(e.a, e.b, p)


def _common_edge(domain: PolygonalDomain, e1: int, e2: int,
                 p1: Point, p2: Point) -> bool:
    """True iff both points lie on one common polygon edge (projections
    landing on an edge endpoint may report either incident edge)."""
    from .geom import on_segment

    for idx in (e1, e2):
        e = domain.edges[idx]
        if on_segment(e.a, e.b, p1) and on_segment(e.a, e.b, p2):
            return True
    return False


# ---------------------------------------------------------------------------
# extended gateway region R(t)

@dataclass(frozen=True)
class TransparentEdge:
    """A transparent boundary edge with its designated endpoint gateway."""

    a: Point                      # canonical
    b: Point                      # canonical
    gateway: Optional[Point]      # canonical; None on collapsed pieces


@dataclass
class QuadrantPiece:
    """The portion of R(t) in one quadrant of t."""

    frame: Frame
    t: Point                      # canonical
    tu: Point                     # canonical up projection of t
    tr: Point                     # canonical right projection of t
    gateways: tuple               # canonical, post-cleanup, sorted by x
    gids: tuple
    chain: tuple                  # canonical top boundary from tu to tr
    transparent: tuple            # TransparentEdge list
    empty: bool

    def ring_canon(self) -> tuple:
        return (self.t,) + self.chain

    def contains_canon(self, p: Point) -> bool:
        return self.locate_canon(p) >= 0

    def locate_canon(self, p: Point) -> int:
        """1 strictly inside, 0 on the piece boundary, -1 outside."""
        if self.empty:
            on = (p.x == self.t.x and self.t.y <= p.y <= self.tu.y) or \
                (p.y == self.t.y and self.t.x <= p.x <= self.tr.x)
            return 0 if on else -1
        return point_in_ring(list(self.ring_canon()), p)


@dataclass
class ExtendedGatewayRegionT:
    """R(t) assembled over all four quadrants of t."""

    t: Point
    pieces: Dict[int, QuadrantPiece]
    vt_ccw: tuple                 # [(gid, real Point)] CCW around t
    specials: tuple               # [(gid, real Point)] subset of vt_ccw
    demoted: tuple = ()           # [(gid, real Point)] scanned exhaustively

    def contains(self, p: Point) -> bool:
        return self.locate(p) >= 0

    def locate(self, p: Point) -> int:
        """1 strictly inside the owning quadrant piece, 0 on its boundary,
        -1 outside.  Points on the seams between quadrant pieces report 0
        even when interior to the union, which is the conservative side
        for every caller."""
        quad = _quadrant_of_point(self.t, p)
        piece = self.pieces[quad]
        return piece.locate_canon(piece.frame.to_canon(p))

    def transparent_real(self) -> list:
        out = []
        for piece in self.pieces.values():
            f = piece.frame
            for e in piece.transparent:
                g = None if e.gateway is None else f.from_canon(e.gateway)
                out.append((f.from_canon(e.a), f.from_canon(e.b), g))
        return out

    def boundary_real(self) -> list:
        """Boundary polylines (one per quadrant piece), real coordinates."""
        out = []
        for quad in (1, 2, 3, 4):
            piece = self.pieces[quad]
            f = piece.frame
            ring = piece.ring_canon()
            out.append([f.from_canon(p) for p in ring])
        return out


def _quadrant_of_point(t: Point, p: Point) -> int:
    """Quadrant of p around t; ties go to the lower-numbered quadrant,
    matching the gateway quadrant assignment."""
    above = p.y >= t.y
    if above:
        return 1 if p.x >= t.x else 2
    return 4 if p.x > t.x else 3


def _slope_positive_canon(frame: Frame, e) -> bool:
    """Sign of a polygon edge's slope in canonical coordinates (general
    position rules out axis-parallel edges)."""
    a, b = frame.to_canon(e.a), frame.to_canon(e.b)
    return (b.x - a.x) * (b.y - a.y) > 0


def _v1_points_on_edge(graph: PathGraph, edge_idx: int) -> list:
    """(gid, Point) of every boundary-graph vertex on a polygon edge
    (type-1 Steiner points plus the edge's endpoints)."""
    return [(i, graph.verts[i].location)
            for i in graph.edge_points[edge_idx]]


def _gid_of(graph: PathGraph, p_real: Point) -> int:
    gid = graph.loc2id.get(p_real)
    if gid is None:
        raise PreconditionViolated(f"special gateway {p_real} not in graph")
    return gid


def _projection_stops(domain: PolygonalDomain, p: Point, direction) -> list:
    """Successive feet of the axis ray from p: the conservative projection
    (which stops at grazed vertices), then its continuations past them."""
    out = []
    cur, edge = axis_projection(domain, p, direction)
    out.append((cur, edge))
    for _ in range(len(domain.vertices)):
        nxt, nxt_edge = axis_projection(domain, cur, direction)
        if nxt == cur:
            break
        cur = nxt
        out.append((nxt, nxt_edge))
    return out


def _cap_start_wall(domain: PolygonalDomain, frame: Frame, tu_real: Point,
                    eu_idx: int, q1: Point, q1_real: Point):
    """Chain and transparent edges from t^u to the first gateway when the
    cap roof is a single wall (no staircase between them)."""
    eu = domain.edges[eu_idx]
    chain: List[Point] = []
    trans: List[TransparentEdge] = []
    if on_segment(eu.a, eu.b, q1_real):
        # the gateway lies on e_u itself: the roof is the opaque piece of
        # e_u between t^u and q1
        chain.append(q1)
        return chain, trans
    # take the first foot of q1's upward ray whose wall closes the cap:
    # either it lands on e_u (the plain trapezoid), or the boundary walks
    # monotonically from t^u to it (the roof turns at polygon vertices)
    for q1u_real, q1u_edge in _projection_stops(domain, q1_real, frame.up):
        if _point_on_edge(domain, eu_idx, q1u_real):
            walk: List[Point] = []
            break
        try:
            walk = _roof_walk(domain, frame, tu_real, eu_idx, q1u_real,
                              q1u_edge, axis="x")
            break
        except PreconditionViolated:
            continue
    else:
        raise PreconditionViolated(f"no cap roof from {tu_real} to {q1_real}")
    q1u = frame.to_canon(q1u_real)
    chain += walk
    if q1u != q1:
        chain.append(q1u)
        trans.append(TransparentEdge(q1u, q1, q1))
    chain.append(q1)
    return chain, trans


def _pentagon_corner(domain: PolygonalDomain, graph: PathGraph, frame: Frame,
                     tu: Point, eu_idx: int, q1: Point,
                     q1_real: Point) -> Point:
    """Fallback roof for the cap before the first gateway: a horizontal
    transparent edge from a graph vertex q0 (a leftward-ray foot of q1 on
    e_u or at t^u itself) to q1, detouring via q0."""
    for q0_real, _ in _projection_stops(domain, q1_real, frame.left):
        q0 = frame.to_canon(q0_real)
        if not (tu.x <= q0.x < q1.x):
            continue
        if q0 != tu and not _point_on_edge(domain, eu_idx, q0_real):
            continue
        if graph.loc2id.get(q0_real) is None:
            continue
        return q0
    raise PreconditionViolated(f"no cap roof corner for gateway {q1_real}")


def _cap_start(domain: PolygonalDomain, graph: PathGraph, frame: Frame,
               t_real: Point, q1: Point):
    """Boundary chain from t's up projection to the first gateway q1.

    Returns (chain after tu, transparent edges, special gateway or None),
    all canonical; the special gateway is the q0 of the positive-slope
    cases.
    """
    tu_real, eu_idx = axis_projection(domain, t_real, frame.up)
    tu = frame.to_canon(tu_real)
    eu = domain.edges[eu_idx]
    q1_real = frame.from_canon(q1)
    chain: List[Point] = []
    trans: List[TransparentEdge] = []
    special = None

    if q1.x == frame.to_canon(t_real).x:
        # the first gateway lies on the projection segment t-t^u; the cap
        # collapses onto that segment
        if q1 != tu:
            trans.append(TransparentEdge(tu, q1, q1))
            chain.append(q1)
        return tu, chain, trans, special

    if not _slope_positive_canon(frame, eu):
        try:
            part, tpart = _cap_start_wall(domain, frame, tu_real, eu_idx,
                                          q1, q1_real)
            chain += part
            trans += tpart
        except PreconditionViolated:
            q0 = _pentagon_corner(domain, graph, frame, tu, eu_idx, q1,
                                  q1_real)
            chain += [q0, q1]
            trans.append(TransparentEdge(q0, q1, q0))
            special = q0
    elif q1.y >= tu.y:
        q0_real, _ = axis_projection(domain, q1_real, frame.left)
        if not _point_on_edge(domain, eu_idx, q0_real):
            # q1 is an endpoint vertex of e_u and its ray grazes past it;
            # clip the pentagon corner back onto e_u
            q0_real = _edge_at_y(eu, q1_real.y)
        q0 = frame.to_canon(q0_real)
        if q0 != q1:
            chain += [q0, q1]
            trans.append(TransparentEdge(q0, q1, q0))
            special = q0
        else:
            chain.append(q1)
    else:
        cands = [frame.to_canon(p) for _, p in
                 _v1_points_on_edge(graph, eu_idx)]
        # non-strict: t^u itself may be a vertex of e_u (a coordinate tie
        # with t), in which case it is the first boundary point beyond the
        # sheared projection
        right = [p for p in cands if p.x >= tu.x]
        if not right:
            raise PreconditionViolated("no boundary point beyond t^u")
        z = min(right, key=lambda p: p.x)
        if z.x >= q1.x:
            part, tpart = _cap_start_wall(domain, frame, tu_real, eu_idx,
                                          q1, q1_real)
            chain += part
            trans += tpart
        else:
            st = build_staircase(domain, frame, frame.from_canon(z), q1_real)
            chain += list(st.path)
            trans += _staircase_transparent(st, left_gw=z, right_gw=q1)
            special = z
    return tu, chain, trans, special


def _cap_end(domain: PolygonalDomain, graph: PathGraph, frame: Frame,
             t_real: Point, qh: Point):
    """Boundary chain from the last gateway qh to t's right projection."""
    tr_real, er_idx = axis_projection(domain, t_real, frame.right)
    tr = frame.to_canon(tr_real)
    er = domain.edges[er_idx]
    qh_real = frame.from_canon(qh)
    chain: List[Point] = []
    trans: List[TransparentEdge] = []
    special = None

    if qh.y == frame.to_canon(t_real).y:
        # the last gateway lies on the projection segment t-t^r; the cap
        # collapses onto that segment
        if qh != tr:
            trans.append(TransparentEdge(qh, tr, qh))
            chain.append(tr)
        return tr, chain, trans, special

    if not _slope_positive_canon(frame, er):
        if on_segment(er.a, er.b, qh_real):
            # the gateway lies on e_r itself: the wall is the opaque piece
            # of e_r between qh and t^r
            chain.append(tr)
        else:
            # first foot of qh's rightward ray whose wall closes the cap
            for qhr_real, qhr_edge in _projection_stops(domain, qh_real,
                                                        frame.right):
                if _point_on_edge(domain, er_idx, qhr_real):
                    walk: List[Point] = []
                    break
                try:
                    walk = _roof_walk(domain, frame, qhr_real, qhr_edge,
                                      tr_real, er_idx, axis="y")
                    break
                except PreconditionViolated:
                    continue
            else:
                raise PreconditionViolated(
                    f"no cap wall from {qh_real} to {tr_real}")
            qhr = frame.to_canon(qhr_real)
            if qhr != qh:
                chain.append(qhr)
                trans.append(TransparentEdge(qh, qhr, qh))
            chain += walk
            chain.append(tr)
    else:
        cands = [frame.to_canon(p) for _, p in
                 _v1_points_on_edge(graph, er_idx)]
        above = [p for p in cands if p.y >= tr.y]
        if not above:
            raise PreconditionViolated("no boundary point above t^r")
        qh1 = min(above, key=lambda p: p.y)
        st = build_staircase(domain, frame, qh_real, frame.from_canon(qh1))
        chain += list(st.path[1:]) + [tr]
        trans += _staircase_transparent(st, left_gw=qh, right_gw=qh1)
        special = qh1
    return tr, chain, trans, special


def _staircase_transparent(st: StaircaseRegion, left_gw: Point,
                           right_gw: Point) -> list:
    """Transparent edges contributed by one staircase path: the horizontal
    piece detours via the left (northwest) gateway, the vertical piece via
    the right one; a middle segment on a polygon edge is opaque."""
    out = []
    if st.kind == "flat":
        if len(st.path) == 2:
            a, b = st.path
            # horizontal pieces detour via the left (northwest) gateway,
            # vertical ones via the right (southeast) gateway
            gw = left_gw if a.y == b.y else right_gw
            out.append(TransparentEdge(a, b, gw))
        return out
    if st.kind == "2seg":
        a, corner, b = st.path
        out.append(TransparentEdge(a, corner, left_gw))
        out.append(TransparentEdge(corner, b, right_gw))
    else:
        # path is a [, a^r] [, b^u] [, b] with duplicates collapsed;
        # a leading horizontal or trailing vertical piece is transparent
        first, second = st.path[0], st.path[1]
        if second.y == first.y:
            out.append(TransparentEdge(first, second, left_gw))
        last, before = st.path[-1], st.path[-2]
        if before.x == last.x:
            out.append(TransparentEdge(before, last, right_gw))
    return out


def _cleanup(entries: list, t: Point) -> list:
    """Of two neighbouring gateways sharing an x- or y-coordinate, keep the
    one closer to t (the shared coordinate means an equal-length detour
    along the region boundary runs through the kept one); re-pointing the
    transparent-edge designations is handled by the caller via the
    returned removals."""
    kept: List = []
    removed: Dict[Point, Point] = {}
    for gid, p in entries:
        entry = (gid, p)
        while kept and (entry[1].x == kept[-1][1].x
                        or entry[1].y == kept[-1][1].y):
            prev = kept[-1]
            if l1(entry[1], t) < l1(prev[1], t):
                kept.pop()
                removed[prev[1]] = entry[1]
            else:
                removed[entry[1]] = prev[1]
                entry = None
                break
        if entry is not None:
            kept.append(entry)
    # resolve chains of removals to surviving gateways
    def _final(p: Point) -> Point:
        while p in removed:
            p = removed[p]
        return p
    removed = {k: _final(v) for k, v in removed.items()}
    return kept, removed


def _build_quadrant_piece(domain: PolygonalDomain, graph: PathGraph,
                          t_real: Point, quad: int, quad_gateways: list):
    """Assemble the R(t) piece of one quadrant, demoting gateways whose
    cap or staircase cannot be built.

    ``quad_gateways`` holds (graph id, real Point) sorted outward in x.
    Returns (piece, demoted) where ``demoted`` lists (gid, real Point)
    entries left out of the piece; a demoted gateway still admits an
    L-shaped shortest connection to t through its cut-line, so it stays a
    valid search candidate — it is merely scanned exhaustively instead of
    through the region walk.
    """
    gws = list(quad_gateways)
    demoted: List = []
    while True:
        try:
            return _assemble_piece(domain, graph, t_real, quad,
                                   gws), demoted
        except (PreconditionViolated, NotInStaircasePosition):
            if not gws:
                raise
        for i in range(len(gws)):
            trial = gws[:i] + gws[i + 1:]
            try:
                piece = _assemble_piece(domain, graph, t_real, quad, trial)
            except (PreconditionViolated, NotInStaircasePosition):
                continue
            demoted.append(gws[i])
            return piece, demoted
        demoted.append(gws.pop())


def _assemble_piece(domain: PolygonalDomain, graph: PathGraph,
                    t_real: Point, quad: int,
                    quad_gateways: list) -> QuadrantPiece:
    frame = FRAMES[quad]
    t = frame.to_canon(t_real)

    if not quad_gateways:
        tu_real, _ = axis_projection(domain, t_real, frame.up)
        tr_real, _ = axis_projection(domain, t_real, frame.right)
        tu, tr = frame.to_canon(tu_real), frame.to_canon(tr_real)
        trans = (TransparentEdge(tu, t, None), TransparentEdge(t, tr, None))
        return QuadrantPiece(frame=frame, t=t, tu=tu, tr=tr, gateways=(),
                             gids=(), chain=(tu, t, tr), transparent=trans,
                             empty=True)

    canon = [(gid, frame.to_canon(p)) for gid, p in quad_gateways]
    canon = prune_trailing_equal_y(canon)
    pts = [p for _, p in canon]

    tu, start_chain, trans, sp0 = _cap_start(domain, graph, frame, t_real,
                                             pts[0])
    chain: List[Point] = [tu] + start_chain
    transparent: List[TransparentEdge] = list(trans)
    for a, b in zip(pts, pts[1:]):
        st = build_staircase(domain, frame, frame.from_canon(a),
                             frame.from_canon(b))
        chain += list(st.path[1:])
        transparent += _staircase_transparent(st, left_gw=a, right_gw=b)
    tr, end_chain, trans, sp1 = _cap_end(domain, graph, frame, t_real,
                                         pts[-1])
    chain += end_chain
    transparent += trans

    entries = list(canon)
    if sp0 is not None:
        entries.insert(0, (_gid_of(graph, frame.from_canon(sp0)), sp0))
    if sp1 is not None:
        entries.append((_gid_of(graph, frame.from_canon(sp1)), sp1))
    kept, removed = _cleanup(entries, t)
    if removed:
        transparent = [
            TransparentEdge(e.a, e.b, removed.get(e.gateway, e.gateway))
            for e in transparent]
    for e in transparent:
        if e.gateway is None:
            continue
        for p in (e.a, e.b):
            if not is_xy_monotone([p, e.gateway, t]):
                raise PreconditionViolated(
                    f"transparent edge {e.a}-{e.b} lost its detour gateway")

    dedup: List[Point] = []
    for p in chain:
        if not dedup or p != dedup[-1]:
            dedup.append(p)
    return QuadrantPiece(frame=frame, t=t, tu=tu, tr=tr,
                         gateways=tuple(p for _, p in kept),
                         gids=tuple(g for g, _ in kept),
                         chain=tuple(dedup),
                         transparent=tuple(transparent), empty=False)


def _ccw_sort_around(t: Point, entries: list) -> list:
    """Sort (gid, real Point) counterclockwise around t starting from the
    positive x-axis, with exact arithmetic."""
    def sector(p: Point) -> int:
        dx, dy = p.x - t.x, p.y - t.y
        if dx > 0 and dy >= 0:
            return 0
        if dx <= 0 and dy > 0:
            return 1
        if dx < 0 and dy <= 0:
            return 2
        return 3

    import functools

    def cmp(a, b):
        pa, pb = a[1], b[1]
        sa, sb = sector(pa), sector(pb)
        if sa != sb:
            return -1 if sa < sb else 1
        cross = (pa.x - t.x) * (pb.y - t.y) - (pa.y - t.y) * (pb.x - t.x)
        if cross > 0:
            return -1
        if cross < 0:
            return 1
        da, db = l1(pa, t), l1(pb, t)
        if da != db:
            return -1 if da < db else 1
        return (a[0] > b[0]) - (a[0] < b[0])

    return sorted(entries, key=functools.cmp_to_key(cmp))


def build_region_t(domain: PolygonalDomain, graph: PathGraph, t: Point,
                   gateway_set) -> ExtendedGatewayRegionT:
    """Build R(t) from t's per-quadrant cut-line gateway set."""
    pieces: Dict[int, QuadrantPiece] = {}
    all_entries: List = []
    specials: List = []
    demoted: List = []
    for quad in (1, 2, 3, 4):
        lst = [(g, graph.verts[g].location)
               for _, g in gateway_set.quadrants.get(quad, [])]
        piece, dropped = _build_quadrant_piece(domain, graph, t, quad, lst)
        pieces[quad] = piece
        demoted += dropped
        frame = piece.frame
        before = {gid for gid, _ in lst}
        for gid, p in zip(piece.gids, piece.gateways):
            entry = (gid, frame.from_canon(p))
            all_entries.append(entry)
            if gid not in before:
                specials.append(entry)
    seen = set()
    unique = []
    for gid, p in all_entries:
        if gid not in seen:
            seen.add(gid)
            unique.append((gid, p))
    vt = _ccw_sort_around(t, unique)
    return ExtendedGatewayRegionT(t=t, pieces=pieces, vt_ccw=tuple(vt),
                                  specials=tuple(specials),
                                  demoted=tuple(demoted))


def validate_region_t(domain: PolygonalDomain, rt: ExtendedGatewayRegionT,
                      graph: PathGraph) -> bool:
    """Exact checks of the region-T guarantees used by the algorithm:
    boundary inside the domain, every gateway visible to t, and the
    xy-monotone detour property of each transparent edge."""
    t = rt.t
    for ring in rt.boundary_real():
        for a, b in zip(ring, ring[1:] + ring[:1]):
            if a != b and not is_visible(domain, a, b):
                return False
    for _, p in rt.vt_ccw:
        if not is_visible(domain, t, p):
            return False
    for a, b, g in rt.transparent_real():
        if g is None:
            continue
        mid = Point(norm(Fraction(a.x + b.x, 2)), norm(Fraction(a.y + b.y, 2)))
        for p in (a, b, mid):
            poly = [p, g, t]
            if not is_xy_monotone(poly):
                return False
            if p != g and not is_visible(domain, p, g):
                return False
            if not is_visible(domain, g, t):
                return False
    return True


def region_s_intersects_region_t(rs: GatewayRegionS,
                                 rt: ExtendedGatewayRegionT) -> bool:
    """Exact intersection test between one R(s) quadrant piece and R(t):
    boundary segments touching, or either region containing a boundary
    vertex of the other."""
    from .geom import segments_touch

    f = rs.frame
    ring_s = [f.from_canon(p) for p in rs.boundary_canon()]
    segs_s = list(zip(ring_s, ring_s[1:] + ring_s[:1]))
    for ring_t in rt.boundary_real():
        segs_t = list(zip(ring_t, ring_t[1:] + ring_t[:1]))
        for a, b in segs_s:
            for c, d in segs_t:
                if segments_touch(a, b, c, d):
                    return True
        for p in ring_t:
            if rs.contains_canon(f.to_canon(p)):
                return True
    for p in ring_s:
        if rt.contains(p):
            return True
    return False


# ---------------------------------------------------------------------------
# Lemma-2 merge scan

def rt_contains_vs_gateway(rt: ExtendedGatewayRegionT, vs_entries: list):
    """First gateway of V(s) contained in R(t), scanning each quadrant's
    sorted lists simultaneously.

    ``vs_entries``: [(gid, real Point)].  Returns ((gid, point, strict),
    counter) where counter is the number of containment evaluations
    (bounded by n_s plus a constant per quadrant).  ``strict`` is True for
    a gateway strictly inside R(t) — only those justify answering the
    query from the hit alone; a gateway merely on the boundary is a tie
    and is reported with ``strict`` False so the caller can keep it as a
    candidate without short-circuiting.
    """
    counter = 0
    boundary_hit = None
    buckets: Dict[int, list] = {1: [], 2: [], 3: [], 4: []}
    for entry in vs_entries:
        buckets[_quadrant_of_point(rt.t, entry[1])].append(entry)
    for quad in (1, 2, 3, 4):
        piece = rt.pieces[quad]
        frame = piece.frame
        hi_x = max(p.x for p in piece.ring_canon())
        for gid, p in sorted(buckets[quad],
                             key=lambda e: frame.to_canon(e[1]).x):
            c = frame.to_canon(p)
            if c.x > hi_x:
                break
            counter += 1
            side = piece.locate_canon(c)
            if side > 0:
                return (gid, p, True), counter
            if side == 0 and boundary_hit is None:
                boundary_hit = (gid, p, False)
    return boundary_hit, counter
