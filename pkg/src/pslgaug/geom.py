"""Exact geometric predicates and metric helpers.

All combinatorial decisions (orientation, crossing, convexity, in-circle)
are made in exact rational arithmetic: coordinates are ints or
fractions.Fraction, never floats.  Euclidean lengths are reported as
double-precision floats; exact comparisons of lengths go through squared
distances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

CCW = 1
CW = -1
COLLINEAR = 0

CONVEX = "convex"
REFLEX = "reflex"


class DegenerateInput(ValueError):
    """Raised when a predicate precondition (general position) is violated."""


def to_rational(value):
    """Convert a decimal string, int or Fraction to an exact rational.

    Floats are rejected: binary floats do not round-trip through the
    exact predicates.
    """
    if isinstance(value, (int, Fraction)):
        return value
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"expected int, Fraction or decimal string, got {type(value).__name__}")


@dataclass(frozen=True)
class Point:
    id: int
    x: Fraction
    y: Fraction

    @staticmethod
    def make(pid, x, y) -> "Point":
        return Point(pid, to_rational(x), to_rational(y))

    def coords(self):
        return (self.x, self.y)


@dataclass(frozen=True)
class Segment:
    a: Point
    b: Point

    def __post_init__(self):
        if self.a.coords() == self.b.coords():
            raise DegenerateInput(f"zero-length segment at point {self.a.id}")


def orient(a: Point, b: Point, c: Point) -> int:
    """Sign of the cross product (b-a) x (c-a): CCW, CW or COLLINEAR."""
    v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
    if v > 0:
        return CCW
    if v < 0:
        return CW
    return COLLINEAR


def orient_xy(ax, ay, bx, by, cx, cy) -> int:
    """orient() on raw exact coordinates (hot-path variant)."""
    v = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    if v > 0:
        return 1
    if v < 0:
        return -1
    return 0


def _between_1d(a, b, c) -> bool:
    return min(a, b) < c < max(a, b)


def segments_properly_cross(ax, ay, bx, by, cx, cy, dx, dy) -> bool:
    """True iff the open segments a-b and c-d share at least one point.

    A shared endpoint is not a crossing; an endpoint of one segment in the
    interior of the other is; so is any collinear overlap.
    """
    d1 = orient_xy(cx, cy, dx, dy, ax, ay)
    d2 = orient_xy(cx, cy, dx, dy, bx, by)
    d3 = orient_xy(ax, ay, bx, by, cx, cy)
    d4 = orient_xy(ax, ay, bx, by, dx, dy)
    if d1 * d2 < 0 and d3 * d4 < 0:
        return True
    if d1 == d2 == d3 == d4 == 0:
        # collinear: open 1D interval overlap along the dominant axis
        if ax != bx or cx != dx:
            lo = max(min(ax, bx), min(cx, dx))
            hi = min(max(ax, bx), max(cx, dx))
        else:
            lo = max(min(ay, by), min(cy, dy))
            hi = min(max(ay, by), max(cy, dy))
        return lo < hi
    # endpoint strictly inside the other segment
    if d3 == 0 and _on_open_segment(ax, ay, bx, by, cx, cy):
        return True
    if d4 == 0 and _on_open_segment(ax, ay, bx, by, dx, dy):
        return True
    if d1 == 0 and _on_open_segment(cx, cy, dx, dy, ax, ay):
        return True
    if d2 == 0 and _on_open_segment(cx, cy, dx, dy, bx, by):
        return True
    return False


def _on_open_segment(ax, ay, bx, by, px, py) -> bool:
    # assumes p collinear with a-b
    if ax != bx:
        return _between_1d(ax, bx, px)
    return _between_1d(ay, by, py)


def properly_cross(s: Segment, t: Segment) -> bool:
    return segments_properly_cross(
        s.a.x, s.a.y, s.b.x, s.b.y, t.a.x, t.a.y, t.b.x, t.b.y
    )


def ccw_angle_class(a: Point, b: Point, c: Point) -> str:
    """Classify the counterclockwise angle at b from ray b->a to ray b->c.

    CONVEX iff the angle is strictly in (0, pi), which holds iff
    (a-b) x (c-b) > 0.  Collinear triples are rejected.
    """
    v = (a.x - b.x) * (c.y - b.y) - (a.y - b.y) * (c.x - b.x)
    if v == 0:
        raise DegenerateInput(f"collinear or coincident triple ({a.id},{b.id},{c.id})")
    return CONVEX if v > 0 else REFLEX


def convex_hull(pts) -> list:
    """Convex hull of points in CCW order (monotone chain, exact).

    Output starts at the lexicographically smallest point and contains no
    collinear triples.  Duplicated coordinates are collapsed first.
    """
    seen = {}
    for p in pts:
        seen.setdefault(p.coords(), p)
    uniq = sorted(seen.values(), key=lambda p: p.coords())
    if len(uniq) < 3:
        raise DegenerateInput("hull needs at least 3 distinct points")

    def half(points):
        chain = []
        for p in points:
            while len(chain) >= 2 and orient(chain[-2], chain[-1], p) != CCW:
                chain.pop()
            chain.append(p)
        return chain

    lower = half(uniq)
    upper = half(uniq[::-1])
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        raise DegenerateInput("all points collinear")
    return hull


def dist2(a: Point, b: Point):
    """Exact squared Euclidean distance."""
    return (a.x - b.x) ** 2 + (a.y - b.y) ** 2


def dist(a: Point, b: Point) -> float:
    return math.hypot(float(a.x - b.x), float(a.y - b.y))


def length(s: Segment) -> float:
    """Euclidean length as a double-precision float."""
    return dist(s.a, s.b)


def walk_length(points) -> float:
    return sum(dist(points[i], points[i + 1]) for i in range(len(points) - 1))


def ekey(u: int, v: int) -> tuple:
    """Canonical undirected edge key."""
    return (u, v) if u < v else (v, u)


def incircle(a: Point, b: Point, c: Point, d: Point) -> int:
    """Exact in-circle test: +1 iff d lies strictly inside the circumcircle
    of triangle (a, b, c), -1 strictly outside, 0 cocircular.

    The triangle may have either orientation (the sign is normalized).
    """
    s = orient(a, b, c)
    if s == 0:
        raise DegenerateInput("incircle of collinear triple")
    adx, ady = a.x - d.x, a.y - d.y
    bdx, bdy = b.x - d.x, b.y - d.y
    cdx, cdy = c.x - d.x, c.y - d.y
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy
    det = (
        alift * (bdx * cdy - cdx * bdy)
        - blift * (adx * cdy - cdx * ady)
        + clift * (adx * bdy - bdx * ady)
    )
    det *= s
    if det > 0:
        return 1
    if det < 0:
        return -1
    return 0


def in_ccw_sector(ux, uy, vx, vy, dx, dy) -> bool:
    """True iff direction d lies strictly inside the sector swept CCW from
    direction u to direction v.

    If u and v are the same direction the sector is the full angle (a leaf
    corner); d then only has to avoid the ray u itself.
    """
    cuv = ux * vy - uy * vx
    cud = ux * dy - uy * dx
    cdv = dx * vy - dy * vx
    if cuv == 0:
        duv = ux * vx + uy * vy
        if duv > 0:
            # u and v coincide: full sector minus the ray u
            return not (cud == 0 and ux * dx + uy * dy > 0)
        raise DegenerateInput("opposite boundary rays in sector test")
    if cuv > 0:
        return cud > 0 and cdv > 0
    # reflex sector: complement of the closed sector from v ccw to u
    cvd = -cdv
    cdu = -cud
    return not (cvd >= 0 and cdu >= 0)


def angle_less(u1, v1, u2, v2) -> bool:
    """Exact comparison of unsigned angles between vector pairs.

    Returns True iff angle(u1, v1) < angle(u2, v2), angles taken in [0, pi].
    Vectors are (dx, dy) exact pairs.
    """
    d1 = u1[0] * v1[0] + u1[1] * v1[1]
    d2 = u2[0] * v2[0] + u2[1] * v2[1]
    n1 = (u1[0] ** 2 + u1[1] ** 2) * (v1[0] ** 2 + v1[1] ** 2)
    n2 = (u2[0] ** 2 + u2[1] ** 2) * (v2[0] ** 2 + v2[1] ** 2)
    # compare d1/sqrt(n1) > d2/sqrt(n2)  (cos is decreasing on [0, pi])
    if d1 >= 0 and d2 < 0:
        return True
    if d1 < 0 and d2 >= 0:
        return False
    if d1 >= 0:
        return d1 * d1 * n2 > d2 * d2 * n1
    return d1 * d1 * n2 < d2 * d2 * n1
