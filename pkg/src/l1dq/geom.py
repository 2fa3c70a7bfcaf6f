"""Exact rational planar geometry for polygonal domains with holes.

Everything in this module is exact: coordinates are arbitrary-precision
rationals (Python ints where integral, ``fractions.Fraction`` otherwise),
and every predicate is decided by integer/rational arithmetic — no floats.

A *polygonal domain* is a simple counterclockwise outer polygon minus a set
of pairwise-disjoint simple clockwise holes.  Input vertex coordinates must
be integers and in general position: all vertex x-coordinates pairwise
distinct and all vertex y-coordinates pairwise distinct.  A consequence used
throughout is that no polygon edge is axis-parallel, so axis-aligned rays
never run along an edge.

Derived points (axis projections, Steiner points) are rationals.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

Coord = Union[int, Fraction]

LEFT, RIGHT, UP, DOWN = "left", "right", "up", "down"
DIRECTIONS = (LEFT, RIGHT, UP, DOWN)


def norm(v) -> Coord:
    """Normalize a number to int (when integral) or reduced Fraction."""
    if isinstance(v, int):
        return v
    f = Fraction(v)
    return int(f) if f.denominator == 1 else f


def coord_str(v: Coord) -> str:
    """Render a coordinate as an exact "p/q" string (always with /q)."""
    f = Fraction(v)
    return f"{f.numerator}/{f.denominator}"


def parse_coord(s) -> Coord:
    """Parse an int, "p/q" string, or plain integer string into a Coord."""
    if isinstance(s, int):
        return s
    return norm(Fraction(str(s)))


@dataclass(frozen=True)
class Point:
    """Immutable exact 2D point; hashable, usable as dict key."""

    x: Coord
    y: Coord

    def __post_init__(self):
        object.__setattr__(self, "x", norm(self.x))
        object.__setattr__(self, "y", norm(self.y))
        # cached float approximations for conservative fast-path filters
        object.__setattr__(self, "fx", float(self.x))
        object.__setattr__(self, "fy", float(self.y))

    def __repr__(self):
        return f"Pt({self.x}, {self.y})"

    def as_json(self):
        return [coord_str(self.x), coord_str(self.y)]


def pt(x, y) -> Point:
    return Point(norm(x), norm(y))


# ---------------------------------------------------------------------------
# errors

class GeometryError(ValueError):
    """Base class for validation/query errors; carries a machine code."""

    code = "Geometry"

    def __init__(self, message=""):
        super().__init__(message or self.code)


class NotSimple(GeometryError):
    code = "NotSimple"


class HolesIntersect(GeometryError):
    code = "HolesIntersect"


class DuplicateX(GeometryError):
    code = "DuplicateX"


class DuplicateY(GeometryError):
    code = "DuplicateY"


class WrongOrientation(GeometryError):
    code = "WrongOrientation"


class PointOutsideDomain(GeometryError):
    code = "PointOutsideDomain"


class NotInStaircasePosition(GeometryError):
    code = "NotInStaircasePosition"


class PlanarityRepairFailed(GeometryError):
    code = "PlanarityRepairFailed"


class PreconditionViolated(GeometryError):
    code = "PreconditionViolated"


# ---------------------------------------------------------------------------
# primitive predicates

def _iscale3(u, v, w):
    """Scale three rationals by a positive common factor into integers.

    Sign-preserving (the factor is a product of denominators), so the
    results can replace the originals in any comparison or cross product.
    """
    du, dv, dw = u.denominator, v.denominator, w.denominator
    if du == 1 and dv == 1 and dw == 1:
        return u, v, w
    return (u.numerator * dv * dw, v.numerator * du * dw,
            w.numerator * du * dv)


def orient(a: Point, b: Point, c: Point) -> int:
    """Sign of cross(b-a, c-a): +1 left turn, -1 right turn, 0 collinear."""
    ax, ay, bx, by, cx, cy = a.x, a.y, b.x, b.y, c.x, c.y
    if (type(ax) is int and type(ay) is int and type(bx) is int
            and type(by) is int and type(cx) is int and type(cy) is int):
        v = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
        return (v > 0) - (v < 0)
    # float filter: far from zero the double-precision sign is certain
    t1 = (b.fx - a.fx) * (c.fy - a.fy)
    t2 = (b.fy - a.fy) * (c.fx - a.fx)
    vf = t1 - t2
    if abs(vf) > 1e-9 * (abs(t1) + abs(t2) + 1.0):
        return (vf > 0) - (vf < 0)
    ax, bx, cx = _iscale3(ax, bx, cx)
    ay, by, cy = _iscale3(ay, by, cy)
    v = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    return (v > 0) - (v < 0)


def on_segment(a: Point, b: Point, p: Point) -> bool:
    """True iff p lies on the closed segment ab."""
    if orient(a, b, p) != 0:
        return False
    ax, bx, px = _iscale3(a.x, b.x, p.x)
    ay, by, py = _iscale3(a.y, b.y, p.y)
    return (min(ax, bx) <= px <= max(ax, bx)
            and min(ay, by) <= py <= max(ay, by))


def l1(a: Point, b: Point) -> Coord:
    """Exact L1 (Manhattan) distance between two points."""
    return norm(abs(a.x - b.x) + abs(a.y - b.y))


def l1_length(polyline: Sequence[Point]) -> Coord:
    """Exact L1 length of a polyline; a single point has length 0."""
    total = 0
    for a, b in zip(polyline, polyline[1:]):
        total += abs(a.x - b.x) + abs(a.y - b.y)
    return norm(total)


def is_xy_monotone(polyline: Sequence[Point]) -> bool:
    """True iff the polyline is monotone in both coordinates."""
    if len(polyline) < 2:
        return True
    return l1_length(polyline) == l1(polyline[0], polyline[-1])


def _bbox_disjoint(a: Point, b: Point, c: Point, d: Point) -> bool:
    """Conservative bbox rejection: True only when certainly disjoint.

    Float comparison with a margin far above double-precision error; a
    False answer is always safe (callers continue with exact tests).
    """
    m = 1e-6
    return (max(a.fx, b.fx) + m < min(c.fx, d.fx)
            or max(c.fx, d.fx) + m < min(a.fx, b.fx)
            or max(a.fy, b.fy) + m < min(c.fy, d.fy)
            or max(c.fy, d.fy) + m < min(a.fy, b.fy))


def segments_properly_cross(a: Point, b: Point, c: Point, d: Point) -> bool:
    """True iff open segments ab and cd cross at a single interior point."""
    if _bbox_disjoint(a, b, c, d):
        return False
    d1 = orient(a, b, c)
    d2 = orient(a, b, d)
    d3 = orient(c, d, a)
    d4 = orient(c, d, b)
    return d1 * d2 < 0 and d3 * d4 < 0


def segments_touch(a: Point, b: Point, c: Point, d: Point) -> bool:
    """True iff closed segments ab and cd share at least one point."""
    if _bbox_disjoint(a, b, c, d):
        return False
    if segments_properly_cross(a, b, c, d):
        return True
    return (on_segment(a, b, c) or on_segment(a, b, d)
            or on_segment(c, d, a) or on_segment(c, d, b))


def segment_params_on(a: Point, b: Point, c: Point, d: Point) -> list:
    """Parameters t in [0,1] where segment ab meets segment cd.

    Returns [] (disjoint), [t] (single contact point), or [t1, t2]
    (collinear overlap endpoints).  Exact rational parameters.
    """
    if _bbox_disjoint(a, b, c, d):
        return []
    d1 = orient(c, d, a)
    d2 = orient(c, d, b)
    if d1 == 0 and d2 == 0:
        # collinear: project c, d onto ab's parameterization
        dx, dy = b.x - a.x, b.y - a.y
        den = dx * dx + dy * dy
        if den == 0:
            return [Fraction(0)] if on_segment(c, d, a) else []
        ts = []
        for p in (c, d):
            t = Fraction((p.x - a.x) * dx + (p.y - a.y) * dy, den)
            ts.append(t)
        lo, hi = min(ts), max(ts)
        lo, hi = max(lo, Fraction(0)), min(hi, Fraction(1))
        if lo > hi:
            return []
        return [lo] if lo == hi else [lo, hi]
    d3 = orient(a, b, c)
    d4 = orient(a, b, d)
    if d1 * d2 > 0 or d3 * d4 > 0:
        return []
    # single contact: solve for t along ab
    # a + t (b-a) on line cd:  cross(d-c, a + t(b-a) - c) = 0
    ex, ey = d.x - c.x, d.y - c.y
    denom = ex * (b.y - a.y) - ey * (b.x - a.x)
    if denom == 0:
        # parallel non-collinear segments can only touch at an endpoint of ab
        ts = [t for t, p in ((Fraction(0), a), (Fraction(1), b))
              if on_segment(c, d, p)]
        return sorted(set(ts))
    t = Fraction(ey * (a.x - c.x) - ex * (a.y - c.y), denom)
    if 0 <= t <= 1:
        return [t]
    return []


def point_on_param(a: Point, b: Point, t) -> Point:
    return Point(norm(a.x + t * (b.x - a.x)), norm(a.y + t * (b.y - a.y)))


# ---------------------------------------------------------------------------
# rings and the domain

def signed_area2(ring: Sequence[Point]) -> Coord:
    """Twice the signed area of a ring (positive = counterclockwise)."""
    s = 0
    n = len(ring)
    for i in range(n):
        a, b = ring[i], ring[(i + 1) % n]
        s += a.x * b.y - b.x * a.y
    return norm(s)


def point_in_ring(ring: Sequence[Point], p: Point) -> int:
    """Locate p w.r.t. a simple ring: 1 strictly inside, 0 on boundary, -1 outside.

    Exact crossing-number walk; handles rays through vertices by the
    half-open edge rule (count an edge iff one endpoint is strictly below
    p.y and the other is at or above).
    """
    n = len(ring)
    inside = False
    for i in range(n):
        a, b = ring[i], ring[(i + 1) % n]
        if on_segment(a, b, p):
            return 0
        ay, by, py = _iscale3(a.y, b.y, p.y)
        if (ay > py) != (by > py):
            # x-coordinate of edge at height p.y, compared to p.x exactly:
            # p.x < a.x + (p.y-a.y)*(b.x-a.x)/(b.y-a.y), cross-multiplied
            ax, bx, px = _iscale3(a.x, b.x, p.x)
            lhs = (px - ax) * (by - ay)
            rhs = (py - ay) * (bx - ax)
            if by > ay:
                cross = lhs < rhs
            else:
                cross = lhs > rhs
            if cross:
                inside = not inside
    return 1 if inside else -1


@dataclass(frozen=True)
class Edge:
    """A directed boundary edge; ring 0 is the outer polygon, 1.. are holes."""

    index: int
    a: Point
    b: Point
    ring: int


@dataclass(frozen=True)
class PolygonalDomain:
    """A validated polygonal domain: outer CCW ring minus CW holes."""

    outer: tuple
    holes: tuple
    vertices: tuple = field(init=False)
    edges: tuple = field(init=False)

    def __post_init__(self):
        verts = list(self.outer)
        for h in self.holes:
            verts.extend(h)
        edges = []
        idx = 0
        for ring_id, ring in enumerate((self.outer,) + tuple(self.holes)):
            n = len(ring)
            for i in range(n):
                edges.append(Edge(idx, ring[i], ring[(i + 1) % n], ring_id))
                idx += 1
        object.__setattr__(self, "vertices", tuple(verts))
        object.__setattr__(self, "edges", tuple(edges))

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def h(self) -> int:
        return len(self.holes)

    def locate(self, p: Point) -> int:
        """1 strictly inside the domain, 0 on its boundary, -1 outside."""
        cache = self.__dict__.get("_loc_cache")
        if cache is None:
            cache = {}
            object.__setattr__(self, "_loc_cache", cache)
        side = cache.get(p)
        if side is None:
            side = self._locate_uncached(p)
            cache[p] = side
        return side

    def _locate_uncached(self, p: Point) -> int:
        side = point_in_ring(self.outer, p)
        if side <= 0:
            return side
        for hole in self.holes:
            hside = point_in_ring(hole, p)
            if hside == 0:
                return 0
            if hside > 0:
                return -1
        return 1

    def contains(self, p: Point) -> bool:
        """True iff p is in the closed domain."""
        return self.locate(p) >= 0

    def require_inside(self, p: Point) -> None:
        if self.locate(p) < 0:
            raise PointOutsideDomain(f"point {p!r} outside domain")

    def vertex_id(self, p: Point) -> Optional[int]:
        try:
            return self.vertices.index(p)
        except ValueError:
            return None


def _check_ring_simple(ring: Sequence[Point]) -> None:
    n = len(ring)
    if len(set(ring)) != n:
        raise NotSimple("repeated vertex in ring")
    for i in range(n):
        a, b = ring[i], ring[(i + 1) % n]
        if a == b:
            raise NotSimple("zero-length edge")
        for j in range(i + 1, n):
            c, d = ring[j], ring[(j + 1) % n]
            adjacent = (j == i + 1) or (i == 0 and j == n - 1)
            if adjacent:
                # consecutive edges share exactly their common endpoint
                shared = b if j == i + 1 else a
                other1 = a if j == i + 1 else b
                other2 = d if j == i + 1 else c
                if on_segment(c, d, other1) and other1 != shared:
                    raise NotSimple("adjacent edges overlap")
                if on_segment(a, b, other2) and other2 != shared:
                    raise NotSimple("adjacent edges overlap")
            else:
                if segments_touch(a, b, c, d):
                    raise NotSimple("non-adjacent edges intersect")


def validate_domain(outer: Iterable, holes: Iterable = ()) -> PolygonalDomain:
    """Validate rings and build the domain; never silently perturbs.

    Raises NotSimple, HolesIntersect, DuplicateX, DuplicateY, or
    WrongOrientation.  Input coordinates must be integers.
    """
    outer = tuple(p if isinstance(p, Point) else pt(*p) for p in outer)
    holes = tuple(tuple(p if isinstance(p, Point) else pt(*p) for p in h)
                  for h in holes)
    rings = (outer,) + holes
    for ring in rings:
        if len(ring) < 3:
            raise NotSimple("ring needs at least 3 vertices")
        for p in ring:
            if not isinstance(p.x, int) or not isinstance(p.y, int):
                raise GeometryError("input coordinates must be integers")
    all_pts = [p for ring in rings for p in ring]
    xs = [p.x for p in all_pts]
    ys = [p.y for p in all_pts]
    if len(set(xs)) != len(xs):
        raise DuplicateX("duplicate vertex x-coordinate")
    if len(set(ys)) != len(ys):
        raise DuplicateY("duplicate vertex y-coordinate")
    for ring in rings:
        _check_ring_simple(ring)
    if signed_area2(outer) <= 0:
        raise WrongOrientation("outer ring must be counterclockwise")
    for h in holes:
        if signed_area2(h) >= 0:
            raise WrongOrientation("hole rings must be clockwise")
    # rings pairwise disjoint (no contact at all), holes strictly inside outer
    ring_edges = []
    for ring in rings:
        n = len(ring)
        ring_edges.append([(ring[i], ring[(i + 1) % n]) for i in range(n)])
    for i in range(len(rings)):
        for j in range(i + 1, len(rings)):
            for a, b in ring_edges[i]:
                for c, d in ring_edges[j]:
                    if segments_touch(a, b, c, d):
                        raise HolesIntersect("rings touch or intersect")
    for h in holes:
        if point_in_ring(outer, h[0]) <= 0:
            raise HolesIntersect("hole not strictly inside outer ring")
        for other in holes:
            if other is not h and point_in_ring(other, h[0]) > 0:
                raise HolesIntersect("hole nested inside another hole")
    return PolygonalDomain(outer=outer, holes=holes)


# ---------------------------------------------------------------------------
# visibility

def is_visible(domain: PolygonalDomain, a: Point, b: Point) -> bool:
    """True iff the closed segment ab lies entirely in the domain.

    Boundary contact is allowed.  Exact: cuts ab at every boundary contact
    and checks the midpoint of each piece for containment.
    Raises PointOutsideDomain if an endpoint is outside.
    """
    domain.require_inside(a)
    domain.require_inside(b)
    if a == b:
        return True
    # scaled integer bbox of ab for a cheap per-edge rejection (domain
    # edges always have integer coordinates)
    lox, hix = (a.x, b.x) if a.x <= b.x else (b.x, a.x)
    loy, hiy = (a.y, b.y) if a.y <= b.y else (b.y, a.y)
    loxn, loxd = lox.numerator, lox.denominator
    hixn, hixd = hix.numerator, hix.denominator
    loyn, loyd = loy.numerator, loy.denominator
    hiyn, hiyd = hiy.numerator, hiy.denominator
    params = {Fraction(0), Fraction(1)}
    for e in domain.edges:
        ea, eb = e.a, e.b
        exlo, exhi = (ea.x, eb.x) if ea.x <= eb.x else (eb.x, ea.x)
        eylo, eyhi = (ea.y, eb.y) if ea.y <= eb.y else (eb.y, ea.y)
        if (hixn < exlo * hixd or exhi * loxd < loxn
                or hiyn < eylo * hiyd or eyhi * loyd < loyn):
            continue
        if segments_properly_cross(a, b, ea, eb):
            return False
        for t in segment_params_on(a, b, ea, eb):
            params.add(Fraction(t))
    cuts = sorted(params)
    for t0, t1 in zip(cuts, cuts[1:]):
        mid = point_on_param(a, b, (t0 + t1) / 2)
        if domain.locate(mid) < 0:
            return False
    return True


_DIR_VEC = {LEFT: (-1, 0), RIGHT: (1, 0), UP: (0, 1), DOWN: (0, -1)}


def _ray_edge_param(p: Point, direction: str, e: Edge):
    """Distance along the axis ray from p to its crossing with edge e, or None.

    General position guarantees no axis-parallel edges, so a crossing is a
    single point.  Returns an exact nonnegative rational (0 if p is on e).
    """
    dx, dy = _DIR_VEC[direction]
    a, b = e.a, e.b
    if dx != 0:
        # horizontal ray at height p.y
        if not (min(a.y, b.y) <= p.y <= max(a.y, b.y)):
            return None
        if a.y == b.y:
            return None  # cannot happen in a valid domain
        x_hit = a.x + Fraction(p.y - a.y, b.y - a.y) * (b.x - a.x)
        lam = (x_hit - p.x) * dx
    else:
        if not (min(a.x, b.x) <= p.x <= max(a.x, b.x)):
            return None
        if a.x == b.x:
            return None
        y_hit = a.y + Fraction(p.x - a.x, b.x - a.x) * (b.y - a.y)
        lam = (y_hit - p.y) * dy
    if lam < 0:
        return None
    return norm(lam)


def axis_projection(domain: PolygonalDomain, p: Point, direction: str):
    """First boundary point hit by the axis ray from p; exact.

    Returns (point, edge_index).  If p is on the boundary and the ray
    immediately exits the domain, returns (p, containing-edge-index).
    Raises PointOutsideDomain.
    """
    domain.require_inside(p)
    dx, dy = _DIR_VEC[direction]
    hits = []  # (lambda, edge_index)
    for e in domain.edges:
        lam = _ray_edge_param(p, direction, e)
        if lam is not None:
            hits.append((lam, e.index))
    hits.sort()
    # group by lambda
    lambdas = sorted({lam for lam, _ in hits})
    first_edge = {}
    for lam, idx in hits:
        first_edge.setdefault(lam, idx)

    def ray_point(lam):
        return Point(norm(p.x + dx * lam), norm(p.y + dy * lam))

    if lambdas and lambdas[0] == 0:
        # p is on the boundary; does the ray immediately exit?
        nxt = lambdas[1] if len(lambdas) > 1 else 1
        mid = ray_point(Fraction(nxt) / 2)
        if domain.locate(mid) < 0:
            return p, first_edge[0]
        lambdas = lambdas[1:]
    if not lambdas:
        # interior ray with no boundary hit: impossible in a bounded domain
        raise GeometryError("axis ray escaped the domain")
    lam = lambdas[0]
    return ray_point(lam), first_edge[lam]


def horizontally_visible(domain: PolygonalDomain, p: Point,
                         x_line: Coord) -> Optional[Point]:
    """Horizontal projection of p onto the vertical line x=x_line, if the
    connecting horizontal segment stays in the domain; else None."""
    domain.require_inside(p)
    x_line = norm(x_line)
    if x_line == p.x:
        return p
    direction = RIGHT if x_line > p.x else LEFT
    q, _ = axis_projection(domain, p, direction)
    reach = abs(q.x - p.x)
    if reach >= abs(x_line - p.x):
        return Point(x_line, p.y)
    return None


def vertically_visible(domain: PolygonalDomain, p: Point,
                       y_line: Coord) -> Optional[Point]:
    """Vertical counterpart of horizontally_visible."""
    domain.require_inside(p)
    y_line = norm(y_line)
    if y_line == p.y:
        return p
    direction = UP if y_line > p.y else DOWN
    q, _ = axis_projection(domain, p, direction)
    if abs(q.y - p.y) >= abs(y_line - p.y):
        return Point(p.x, y_line)
    return None


# ---------------------------------------------------------------------------
# slab decompositions (fast-path point location / ray shooting)

@dataclass(frozen=True)
class SlabMap:
    """A slab decomposition along one axis.

    ``cuts`` are the sorted distinct vertex coordinates along the axis;
    slab i spans (cuts[i-1], cuts[i]) with open-ended outer slabs.  Each
    slab stores the edges whose projection covers it, sorted by their
    position along the other axis inside the slab (edges spanning a slab
    are totally ordered since the boundary is non-crossing).
    """

    axis: str  # "x" for vertical slabs, "y" for horizontal slabs
    cuts: tuple
    slabs: tuple  # tuple of tuples of Edge

    def slab_index(self, v: Coord) -> int:
        import bisect
        return bisect.bisect_left(self.cuts, v)

    def edges_at(self, v: Coord):
        """Edges whose axis-projection contains coordinate v (closed)."""
        i = self.slab_index(v)
        out = list(self.slabs[i]) if i < len(self.slabs) else []
        if i < len(self.cuts) and self.cuts[i] == v:
            seen = {e.index for e in out}
            for e in self.slabs[i + 1]:
                if e.index not in seen:
                    out.append(e)
        return out


@dataclass(frozen=True)
class Decompositions:
    """Vertical and horizontal slab maps plus per-vertex visibility walls."""

    vertical: SlabMap
    horizontal: SlabMap
    vertical_walls: tuple   # (vertex, bottom point, top point)
    horizontal_walls: tuple  # (vertex, left point, right point)


def _build_slab_map(domain: PolygonalDomain, axis: str) -> SlabMap:
    key = (lambda p: p.x) if axis == "x" else (lambda p: p.y)
    cuts = tuple(sorted(key(v) for v in domain.vertices))
    slabs = []
    for i in range(len(cuts) + 1):
        lo = cuts[i - 1] if i > 0 else None
        hi = cuts[i] if i < len(cuts) else None
        members = []
        for e in domain.edges:
            a, b = key(e.a), key(e.b)
            elo, ehi = min(a, b), max(a, b)
            if lo is not None and hi is not None and elo <= lo and ehi >= hi:
                members.append(e)
        if members and lo is not None and hi is not None:
            mid = Fraction(lo + hi, 2)
            def other_at(e, m=mid):
                a, b = e.a, e.b
                if axis == "x":
                    return a.y + Fraction(m - a.x, b.x - a.x) * (b.y - a.y)
                return a.x + Fraction(m - a.y, b.y - a.y) * (b.x - a.x)
            members.sort(key=other_at)
        slabs.append(tuple(members))
    return SlabMap(axis=axis, cuts=cuts, slabs=tuple(slabs))


def build_decompositions(domain: PolygonalDomain) -> Decompositions:
    """Build both slab maps and the per-vertex visibility walls."""
    vmap = _build_slab_map(domain, "x")
    hmap = _build_slab_map(domain, "y")
    vwalls = []
    hwalls = []
    for v in domain.vertices:
        up, _ = axis_projection(domain, v, UP)
        down, _ = axis_projection(domain, v, DOWN)
        vwalls.append((v, down, up))
        left, _ = axis_projection(domain, v, LEFT)
        right, _ = axis_projection(domain, v, RIGHT)
        hwalls.append((v, left, right))
    return Decompositions(vertical=vmap, horizontal=hmap,
                          vertical_walls=tuple(vwalls),
                          horizontal_walls=tuple(hwalls))


def axis_projection_fast(domain: PolygonalDomain, decomps: Decompositions,
                         p: Point, direction: str):
    """Slab-map axis ray shooting; falls back to the exhaustive scan when
    the ray coordinate coincides with a slab cut (vertex coordinate)."""
    domain.require_inside(p)
    slab_map = decomps.horizontal if direction in (LEFT, RIGHT) else decomps.vertical
    coord = p.y if direction in (LEFT, RIGHT) else p.x
    if coord in slab_map.cuts:
        return axis_projection(domain, p, direction)
    candidates = slab_map.edges_at(coord)
    dx, dy = _DIR_VEC[direction]
    best = None
    for e in candidates:
        lam = _ray_edge_param(p, direction, e)
        if lam is None:
            continue
        if best is None or lam < best[0] or (lam == best[0] and e.index < best[1]):
            best = (lam, e.index)
    if best is None:
        return axis_projection(domain, p, direction)
    lam, idx = best
    if lam == 0:
        return axis_projection(domain, p, direction)
    return Point(norm(p.x + dx * lam), norm(p.y + dy * lam)), idx


def is_visible_brute(domain: PolygonalDomain, a: Point, b: Point) -> bool:
    """Alias kept separate so tests can cross-check fast paths against it."""
    return is_visible(domain, a, b)
