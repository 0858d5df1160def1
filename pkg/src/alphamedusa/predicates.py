"""Exact static geometric predicates at a fixed rational time.

Everything here takes points in Q^3 (triples of Fractions) and returns
exact values.  The orientation/insphere sign convention is fixed once:
``orient4 > 0`` is a positively oriented tetrahedron, and for such a
tetrahedron ``insphere5 < 0`` means the fifth point lies strictly inside
the circumsphere.  Circumball routines return squared radii so no square
roots ever appear.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import DegenerateSimplex
from .motion import Point


def sub(a: Point, b: Point) -> Point:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def dot(a: Point, b: Point) -> Fraction:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def cross(a: Point, b: Point) -> Point:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def norm2(a: Point) -> Fraction:
    return dot(a, a)


def dist2(a: Point, b: Point) -> Fraction:
    return norm2(sub(a, b))


def _det3(r0, r1, r2) -> Fraction:
    return (
        r0[0] * (r1[1] * r2[2] - r1[2] * r2[1])
        - r0[1] * (r1[0] * r2[2] - r1[2] * r2[0])
        + r0[2] * (r1[0] * r2[1] - r1[1] * r2[0])
    )


def orient4(a: Point, b: Point, c: Point, d: Point) -> Fraction:
    """Determinant of the 4x4 matrix with rows (1, x, y, z)."""
    return _det3(sub(b, a), sub(c, a), sub(d, a))


def insphere5(a: Point, b: Point, c: Point, d: Point, p: Point) -> Fraction:
    """Determinant of the 5x5 matrix with rows (1, x, y, z, x²+y²+z²)."""
    rows = []
    na = norm2(a)
    for q in (b, c, d, p):
        rows.append(sub(q, a) + (norm2(q) - na,))
    # expand the 4x4 along the last column
    det = Fraction(0)
    sign = -1
    for i in range(4):
        minor = [rows[j][:3] for j in range(4) if j != i]
        det += sign * rows[i][3] * _det3(*minor)
        sign = -sign
    return det


def circumsphere(points: Sequence[Point]) -> tuple[Point, Fraction]:
    """Circumcenter and squared circumradius of a 1-, 2-, or 3-simplex.

    The circumball is the smallest ball whose boundary passes through all
    vertices: for an edge the diametral ball, for a triangle the ball
    centered at the circumcenter within the triangle's plane.
    """
    pts = list(points)
    k = len(pts)
    if k == 1:
        return pts[0], Fraction(0)
    if k == 2:
        u, v = pts
        c = tuple((a + b) / 2 for a, b in zip(u, v))
        return c, dist2(u, v) / 4
    if k == 3:
        u, v, w = pts
        e1, e2 = sub(v, u), sub(w, u)
        den = norm2(cross(e1, e2))
        if den == 0:
            raise DegenerateSimplex("collinear triangle vertices")
        cu = _triangle_num(e1, e2)
        c = tuple(ui + ci / (2 * den) for ui, ci in zip(u, cu))
        return c, dist2(c, u)
    if k == 4:
        u, v, w, x = pts
        rows = [sub(v, u), sub(w, u), sub(x, u)]
        den = _det3(*rows)
        if den == 0:
            raise DegenerateSimplex("coplanar tetrahedron vertices")
        b = [norm2(r) for r in rows]
        cu = []
        for i in range(3):
            cols = [[rows[r][j] for j in range(3)] for r in range(3)]
            for r in range(3):
                cols[r][i] = b[r]
            cu.append(_det3(*cols) / (2 * den))
        c = tuple(ui + ci for ui, ci in zip(u, cu))
        return c, dist2(c, u)
    raise ValueError(f"simplex with {k} vertices")


def _triangle_num(e1: Point, e2: Point) -> Point:
    """(c - u) * 2*|n|² for the triangle circumcenter: the classical
    |e1|²·(e2×n) ... replaced by the Cramer solution of
      2 (c-u)·e1 = |e1|²,  2 (c-u)·e2 = |e2|²,  (c-u)·n = 0."""
    n = cross(e1, e2)
    m = (e1, e2, n)
    b = (norm2(e1), norm2(e2), Fraction(0))
    out = []
    for i in range(3):
        cols = [list(row) for row in m]
        for r in range(3):
            cols[r][i] = b[r]
        out.append(_det3(*cols))
    return tuple(out)


def circumradius_sq(points: Sequence[Point]) -> Fraction:
    return circumsphere(points)[1]


def side_of_circumball(simplex: Sequence[Point], p: Point) -> int:
    """-1 if p is strictly inside the circumball of the simplex, 0 on its
    boundary, +1 strictly outside."""
    c, r2 = circumsphere(simplex)
    v = dist2(p, c) - r2
    return (v > 0) - (v < 0)


def is_short(simplex: Sequence[Point], alpha_sq) -> bool:
    """Circumradius² ≤ alpha₀², exactly."""
    return circumradius_sq(simplex) <= Fraction(alpha_sq)


def is_gabriel(simplex: Sequence[Point], others: Sequence[Point]) -> bool:
    """No other point strictly inside the circumball."""
    c, r2 = circumsphere(simplex)
    return all(dist2(p, c) >= r2 for p in others)
