"""Shared test fixtures: two small domains used throughout the test suite.

FIX_E: a convex, hole-free quadrilateral in general position.
FIX_H: the same outer boundary with one triangular hole.
"""

from .geom import validate_domain

FIX_E_OUTER = [(0, 0), (40, 1), (41, 40), (1, 41)]
FIX_H_HOLE = [(10, 20), (16, 31), (20, 23)]  # clockwise


def fix_e():
    return validate_domain(FIX_E_OUTER)


def fix_h():
    return validate_domain(FIX_E_OUTER, [FIX_H_HOLE])
