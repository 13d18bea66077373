"""
Exact convex polygon clipping in the plane

Points are pairs of Fractions. Polygons are lists of points in
counter-clockwise order; a halfplane (a, b, c) keeps a·x + b·y + c >= 0.
"""

from fractions import Fraction
from typing import List, Sequence, Tuple

Point = Tuple[Fraction, Fraction]
Halfplane = Tuple[Fraction, Fraction, Fraction]

# The simplex in the (α₁, α₂) chart: e1, e2, e3
TRIANGLE: List[Point] = [
    (Fraction(1), Fraction(0)),
    (Fraction(0), Fraction(1)),
    (Fraction(0), Fraction(0)),
]


def side(halfplane: Halfplane, point: Point) -> Fraction:
    a, b, c = halfplane
    return a * point[0] + b * point[1] + c


def clip(polygon: Sequence[Point], halfplane: Halfplane) -> List[Point]:
    """Sutherland-Hodgman against one halfplane"""
    if not polygon:
        return []
    if len(polygon) == 1:
        return list(polygon) if side(halfplane, polygon[0]) >= 0 else []
    result: List[Point] = []
    count = len(polygon)
    for k in range(count):
        p = polygon[k]
        q = polygon[(k + 1) % count]
        fp = side(halfplane, p)
        fq = side(halfplane, q)
        if fp >= 0:
            result.append(p)
        if fp * fq < 0:
            t = fp / (fp - fq)
            result.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return simplify(result)


def _cross(o: Point, a: Point, b: Point) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _between(a: Point, b: Point, c: Point) -> bool:
    """b on the closed segment a-c, given the three are collinear"""
    return min(a[0], c[0]) <= b[0] <= max(a[0], c[0]) and min(a[1], c[1]) <= b[1] <= max(a[1], c[1])


def simplify(polygon: Sequence[Point]) -> List[Point]:
    """Drop repeated points and points lying inside an edge"""
    points = list(polygon)
    changed = True
    while changed and len(points) > 1:
        changed = False
        count = len(points)
        for k in range(count):
            if points[k] == points[(k + 1) % count]:
                del points[k]
                changed = True
                break
        if changed or len(points) < 3:
            continue
        count = len(points)
        for k in range(count):
            prev, here, succ = points[k - 1], points[k], points[(k + 1) % count]
            if _cross(prev, here, succ) == 0 and _between(prev, here, succ):
                del points[k]
                changed = True
                break
    return points


def rotate_to(polygon: Sequence[Point], start: Point) -> List[Point]:
    points = list(polygon)
    if start in points:
        k = points.index(start)
        points = points[k:] + points[:k]
    return points


def intersect(halfplanes: Sequence[Halfplane]) -> List[Point]:
    """Vertices of the simplex cut by every halfplane, starting at e1"""
    polygon = list(TRIANGLE)
    for halfplane in halfplanes:
        polygon = clip(polygon, halfplane)
        if not polygon:
            break
    return rotate_to(polygon, TRIANGLE[0])
