"""Random general-position domains and query points for fuzzing.

Domains are star-shaped rings over integer coordinates drawn from distinct
x- and y-pools, so no two vertices share a coordinate (the general-position
requirement); candidates that fail validation are rejected and redrawn.
"""
from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Optional

from .geom import GeometryError, Point, PolygonalDomain, pt, validate_domain


def _star_ring(points: list) -> list:
    """Order points into a star polygon around their centroid (CCW)."""
    cx = Fraction(sum(p[0] for p in points), len(points))
    cy = Fraction(sum(p[1] for p in points), len(points))
    return sorted(points,
                  key=lambda p: math.atan2(float(p[1] - cy),
                                           float(p[0] - cx)))


def random_domain(rng: random.Random, n_outer: int = 10, n_holes: int = 1,
                  max_hole_verts: int = 5, span: int = 200,
                  max_tries: int = 500) -> PolygonalDomain:
    """A validated random domain with ``n_outer`` outer vertices and up to
    ``n_holes`` star-shaped holes (fewer when placement keeps failing)."""
    for _ in range(max_tries):
        hole_sizes = [rng.randrange(3, max_hole_verts + 1)
                      for _ in range(n_holes)]
        if n_outer + sum(hole_sizes) > span // 2:
            raise ValueError("span too small for the requested vertex count")
        xs = rng.sample(range(span), n_outer)
        ys = rng.sample(range(span), n_outer)
        outer = _star_ring(list(zip(xs, ys)))
        try:
            domain = validate_domain(outer)
        except GeometryError:
            continue
        # place each hole in a small window around a random interior center
        used_x, used_y = set(xs), set(ys)
        window = max(span // 8, 2 * max_hole_verts)
        holes: list = []
        for size in hole_sizes:
            for _ in range(30):
                try:
                    center = random_interior_point(domain, rng, max_tries=50)
                except ValueError:
                    break
                hx = [v for v in rng.sample(range(center.x - window,
                                                  center.x + window + 1),
                                            2 * window + 1)
                      if v not in used_x][:size]
                hy = [v for v in rng.sample(range(center.y - window,
                                                  center.y + window + 1),
                                            2 * window + 1)
                      if v not in used_y][:size]
                if len(hx) < size or len(hy) < size:
                    continue
                ring = _star_ring(list(zip(hx, hy)))
                ring.reverse()  # holes are clockwise
                try:
                    domain = validate_domain(outer, holes + [ring])
                except GeometryError:
                    continue
                holes.append(ring)
                used_x.update(hx)
                used_y.update(hy)
                break
        return validate_domain(outer, holes)
    raise ValueError("could not generate a valid random domain")


def random_interior_point(domain: PolygonalDomain, rng: random.Random,
                          denominator: int = 1,
                          max_tries: int = 1000) -> Point:
    """A strictly interior point with coordinates of the given denominator."""
    xs = [p.x for p in domain.vertices]
    ys = [p.y for p in domain.vertices]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    d = denominator
    for _ in range(max_tries):
        p = pt(Fraction(rng.randrange(x0 * d, x1 * d + 1), d),
               Fraction(rng.randrange(y0 * d, y1 * d + 1), d))
        if domain.locate(p) > 0:
            return p
    raise ValueError("could not sample an interior point")
