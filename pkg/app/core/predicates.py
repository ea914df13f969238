"""
Exact planar predicates on rational points.

Everything here works on ``Fraction`` coordinates, so orientation,
incidence and inside/outside answers are exact.  Rings are vertex lists
without the closing repeat.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import pairwise
from typing import Iterator, Sequence

Point = tuple[Fraction, Fraction]
Ring = tuple[Point, ...]
Segment = tuple[Point, Point]


def point(x: Fraction | int | str, y: Fraction | int | str) -> Point:
    return (Fraction(x), Fraction(y))


def sign(value: Fraction | int) -> int:
    return (value > 0) - (value < 0)


def orientation(a: Point, b: Point, c: Point) -> int:
    """+1 if a, b, c turn counterclockwise, −1 clockwise, 0 collinear."""
    return sign((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))


def edges(ring: Ring) -> Iterator[Segment]:
    yield from pairwise(ring)
    yield (ring[-1], ring[0])


def signed_area2(ring: Ring) -> Fraction:
    """Twice the signed area (positive for counterclockwise rings)."""
    return sum((a[0] * b[1] - b[0] * a[1] for a, b in edges(ring)), Fraction(0))


def on_segment(p: Point, a: Point, b: Point) -> bool:
    if orientation(a, b, p) != 0:
        return False
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool:
    """Closed segments [a, b] and [c, d] share at least one point."""
    o1, o2 = orientation(a, b, c), orientation(a, b, d)
    o3, o4 = orientation(c, d, a), orientation(c, d, b)
    if o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4):
        return True
    return on_segment(c, a, b) or on_segment(d, a, b) or on_segment(a, c, d) or on_segment(b, c, d)


def winding_number(p: Point, ring: Ring) -> int:
    """Winding number of the ring around p (p not on the ring)."""
    winding = 0
    for source, target in edges(ring):
        if source[1] <= p[1]:
            if target[1] > p[1] and orientation(source, target, p) > 0:
                winding += 1
        elif target[1] <= p[1] and orientation(source, target, p) < 0:
            winding -= 1
    return winding


def on_ring(p: Point, ring: Ring) -> bool:
    return any(on_segment(p, a, b) for a, b in edges(ring))


def strictly_inside(p: Point, ring: Ring) -> bool:
    return not on_ring(p, ring) and winding_number(p, ring) != 0


def point_segment_distance2(p: Point, a: Point, b: Point) -> tuple[Fraction, Point]:
    """Squared distance from p to [a, b] and the nearest point, both exact."""
    dx, dy = b[0] - a[0], b[1] - a[1]
    length2 = dx * dx + dy * dy
    if length2 == 0:
        nearest = a
    else:
        t = ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / length2
        t = min(Fraction(1), max(Fraction(0), t))
        nearest = (a[0] + t * dx, a[1] + t * dy)
    ex, ey = p[0] - nearest[0], p[1] - nearest[1]
    return ex * ex + ey * ey, nearest


def segment_segment_distance2(a: Point, b: Point, c: Point, d: Point) -> tuple[Fraction, Point]:
    """
    Squared distance between [a, b] and [c, d] with the nearest point on [a, b].

    In the plane two disjoint segments are closest at an endpoint of one of
    them, so four point–segment distances decide it.
    """
    if segments_intersect(a, b, c, d):
        return Fraction(0), a if on_segment(a, c, d) else _crossing(a, b, c, d)
    candidates = []
    for p in (a, b):
        dist2, _ = point_segment_distance2(p, c, d)
        candidates.append((dist2, p))
    for q in (c, d):
        dist2, nearest = point_segment_distance2(q, a, b)
        candidates.append((dist2, nearest))
    return min(candidates, key=lambda item: item[0])


def _crossing(a: Point, b: Point, c: Point, d: Point) -> Point:
    for p in (b, c, d):
        if on_segment(p, a, b) and on_segment(p, c, d):
            return p
    r = (b[0] - a[0], b[1] - a[1])
    s = (d[0] - c[0], d[1] - c[1])
    denom = r[0] * s[1] - r[1] * s[0]
    t = ((c[0] - a[0]) * s[1] - (c[1] - a[1]) * s[0]) / denom
    return (a[0] + t * r[0], a[1] + t * r[1])


def ring_is_simple(ring: Sequence[Point]) -> bool:
    """No repeated vertices, no zero-length edges, and non-adjacent edges never meet."""
    n = len(ring)
    if n < 3 or len(set(ring)) != n:
        return False
    segments = list(edges(tuple(ring)))
    for i in range(n):
        a, b = segments[i]
        for j in range(i + 1, n):
            c, d = segments[j]
            adjacent = j == i + 1 or (i == 0 and j == n - 1)
            if not adjacent:
                if segments_intersect(a, b, c, d):
                    return False
                continue
            # adjacent edges share one vertex; they must not fold back onto each other
            shared = b if j == i + 1 else a
            other_1 = a if shared == b else b
            other_2 = d if shared == c else c
            if orientation(shared, other_1, other_2) == 0 and on_segment(other_2, shared, other_1):
                return False
            if orientation(shared, other_1, other_2) == 0 and on_segment(other_1, shared, other_2):
                return False
    return signed_area2(tuple(ring)) != 0
