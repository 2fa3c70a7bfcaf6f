"""Exact two-point L1 shortest-path queries in polygonal domains with holes.

Build-once preprocessing over a path-preserving Steiner graph, then
per-query gateway construction and a divide-and-conquer via-gateway
search, cross-checked against an independent brute-force oracle.
"""

from .geom import (  # noqa: F401
    Coord,
    Point,
    PolygonalDomain,
    Decompositions,
    pt,
    validate_domain,
    build_decompositions,
    orient,
    l1,
    l1_length,
    is_visible,
    axis_projection,
    horizontally_visible,
)

__version__ = "0.1.0"
