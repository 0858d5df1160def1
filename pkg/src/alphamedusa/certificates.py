"""Certificate polynomials for moving points.

Each constructor takes linear motions (or anything with coord_polys())
plus the squared radius bound where relevant, and returns one univariate
polynomial in t whose sign tracks the monitored predicate on the common
validity interval:

  flip_certificate_5   zero iff the five points are co-spherical
  flip_certificate_4   zero iff the four points are coplanar (hull case)
  radius_certificate_* positive iff the circumradius exceeds alpha0

Row order of the determinants fixes the sign convention: with the four
base points positively oriented (flip_certificate_4 > 0), a fifth point
strictly inside their circumsphere makes flip_certificate_5 negative.
All results are denominator-cleared to integer coefficients, which
preserves signs and roots.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .polynomial import Poly, clear_denominators

Motion3 = tuple[Poly, Poly, Poly]


def motion_polys(m) -> Motion3:
    if isinstance(m, tuple):
        return m
    return m.coord_polys()


def _sub(a: Motion3, b: Motion3) -> Motion3:
    return tuple(x - y for x, y in zip(a, b))


def _dot(a: Motion3, b: Motion3) -> Poly:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _cross(a: Motion3, b: Motion3) -> Motion3:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def _det3(r0, r1, r2) -> Poly:
    return (
        r0[0] * (r1[1] * r2[2] - r1[2] * r2[1])
        - r0[1] * (r1[0] * r2[2] - r1[2] * r2[0])
        + r0[2] * (r1[0] * r2[1] - r1[1] * r2[0])
    )


def _det4(rows) -> Poly:
    det = Poly(())
    sign = 1
    for i in range(4):
        minor = [
            [rows[j][k] for k in range(4) if k != 0] for j in range(4) if j != i
        ]
        det = det + sign * rows[i][0] * _det3(*minor)
        sign = -sign
    return det


def flip_certificate_4(motions) -> Poly:
    """Orientation determinant (rows 1, x, y, z) of four moving points;
    degree ≤ 3 for linear motions."""
    ms = [motion_polys(m) for m in motions]
    rows = [_sub(m, ms[0]) for m in ms[1:]]
    return clear_denominators(_det3(*rows))


def flip_certificate_5(motions) -> Poly:
    """In-sphere determinant (rows 1, x, y, z, ‖·‖²) of five moving
    points; degree ≤ 5 for linear motions."""
    ms = [motion_polys(m) for m in motions]
    n0 = _dot(ms[0], ms[0])
    rows = []
    for m in ms[1:]:
        d = _sub(m, ms[0])
        rows.append([d[0], d[1], d[2], _dot(m, m) - n0])
    # expand along the norm column to reuse the 3x3 helper
    det = Poly(())
    sign = -1
    for i in range(4):
        minor = [rows[j][:3] for j in range(4) if j != i]
        det = det + sign * rows[i][3] * _det3(*minor)
        sign = -sign
    return clear_denominators(det)


def radius_certificate_edge(m1, m2, alpha_sq) -> Poly:
    """‖u−v‖² − 4·alpha0²; degree ≤ 2."""
    d = _sub(motion_polys(m1), motion_polys(m2))
    return clear_denominators(_dot(d, d) - Poly((4 * Fraction(alpha_sq),)))


def radius_certificate_triangle(m1, m2, m3, alpha_sq) -> Poly:
    """‖u−v‖²‖u−w‖²‖v−w‖² − 4·alpha0²·‖(u−w)×(v−w)‖²; degree ≤ 6.

    Equals 4‖n‖²·(r² − alpha0²) with n the plane normal, so the sign is
    positive exactly when the circumradius exceeds alpha0."""
    u, v, w = (motion_polys(m) for m in (m1, m2, m3))
    uv, uw, vw = _sub(u, v), _sub(u, w), _sub(v, w)
    n = _cross(uw, vw)
    lengths = _dot(uv, uv) * _dot(uw, uw) * _dot(vw, vw)
    return clear_denominators(lengths - 4 * Fraction(alpha_sq) * _dot(n, n))


def radius_certificate_triangle_deg10(m1, m2, m3, alpha_sq) -> Poly:
    """Cramer form num_x²+num_y²+num_z² − 4·alpha0²·den²; degree ≤ 10.

    Same sign and roots as the degree-6 certificate wherever the points
    are not collinear (den = ‖n‖² factors out squared)."""
    u, v, w = (motion_polys(m) for m in (m1, m2, m3))
    e1, e2 = _sub(v, u), _sub(w, u)
    n = _cross(e1, e2)
    m = (e1, e2, n)
    b = (_dot(e1, e1), _dot(e2, e2), Poly(()))
    nums = []
    for i in range(3):
        cols = [list(row) for row in m]
        for r in range(3):
            cols[r][i] = b[r]
        nums.append(_det3(*cols))
    den = _det3(*m)
    cert = (
        nums[0] * nums[0]
        + nums[1] * nums[1]
        + nums[2] * nums[2]
        - 4 * Fraction(alpha_sq) * den * den
    )
    return clear_denominators(cert)


def radius_certificate_tet(m1, m2, m3, m4, alpha_sq) -> Poly:
    """Circumsphere-minor certificate D_x²+D_y²+D_z² − 4ac − 4·alpha0²·a²
    with a, D_*, c the minors of the sphere-equation matrix; degree ≤ 8.

    r² = (D_x²+D_y²+D_z²−4ac)/(4a²), so the expression is 4a²(r²−alpha0²)
    and positive exactly when the circumradius exceeds alpha0."""
    ms = [motion_polys(m) for m in (m1, m2, m3, m4)]
    one = Poly((1,))
    norms = [_dot(m, m) for m in ms]
    xs = [m[0] for m in ms]
    ys = [m[1] for m in ms]
    zs = [m[2] for m in ms]
    ones = [one] * 4

    def col_det(c0, c1, c2, c3):
        return _det4([[c0[i], c1[i], c2[i], c3[i]] for i in range(4)])

    a = col_det(xs, ys, zs, ones)
    dx = col_det(norms, ys, zs, ones)
    dy = -col_det(norms, xs, zs, ones)
    dz = col_det(norms, xs, ys, ones)
    c = col_det(norms, xs, ys, zs)
    cert = dx * dx + dy * dy + dz * dz - 4 * a * c - 4 * Fraction(alpha_sq) * a * a
    return clear_denominators(cert)


def radius_certificate(simplex_motions: Sequence, alpha_sq, *, triangle_deg6: bool = True) -> Poly:
    """Dispatch on simplex dimension (2, 3, or 4 motions)."""
    k = len(simplex_motions)
    if k == 2:
        return radius_certificate_edge(*simplex_motions, alpha_sq)
    if k == 3:
        if triangle_deg6:
            return radius_certificate_triangle(*simplex_motions, alpha_sq)
        return radius_certificate_triangle_deg10(*simplex_motions, alpha_sq)
    if k == 4:
        return radius_certificate_tet(*simplex_motions, alpha_sq)
    raise ValueError(f"radius certificate for {k} motions")


def triangle_collinearity_poly(m1, m2, m3) -> Poly:
    """‖(v−u)×(w−u)‖²; zero exactly when the three points are collinear.

    Every real root has even multiplicity (the expression is a sum of
    squares), which is how the degree-10 triangle certificate acquires
    its spurious non-crossing roots."""
    u, v, w = (motion_polys(m) for m in (m1, m2, m3))
    n = _cross(_sub(v, u), _sub(w, u))
    return clear_denominators(_dot(n, n))


def gabriel_poly_edge(m1, m2, mp) -> Poly:
    """Sign: positive iff p lies strictly outside the diametral ball of
    (u, v); equals ‖2p−u−v‖² − ‖u−v‖²."""
    u, v, p = (motion_polys(m) for m in (m1, m2, mp))
    d1 = tuple(2 * a - b - c for a, b, c in zip(p, u, v))
    d2 = _sub(u, v)
    return clear_denominators(_dot(d1, d1) - _dot(d2, d2))


def gabriel_poly_triangle(m1, m2, m3, mp) -> Poly:
    """Sign: positive iff p lies strictly outside the circumball of the
    triangle; equals ‖2·den·(p−u) − num‖² − ‖num‖² with den = ‖n‖²."""
    u, v, w, p = (motion_polys(m) for m in (m1, m2, m3, mp))
    e1, e2 = _sub(v, u), _sub(w, u)
    n = _cross(e1, e2)
    m = (e1, e2, n)
    b = (_dot(e1, e1), _dot(e2, e2), Poly(()))
    nums = []
    for i in range(3):
        cols = [list(row) for row in m]
        for r in range(3):
            cols[r][i] = b[r]
        nums.append(_det3(*cols))
    den = _det3(*m)
    pu = _sub(p, u)
    diff = tuple(2 * den * pu[i] - nums[i] for i in range(3))
    cert = _dot(diff, diff) - _dot(tuple(nums), tuple(nums))
    return clear_denominators(cert)
