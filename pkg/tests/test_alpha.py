"""Static alpha classification against an independent circumball oracle.

The oracle recomputes circumcenters by solving the Gram system with
plain Gaussian elimination over Fraction, so it shares no code with the
determinant-based predicates used by the classifier.
"""

import random
from fractions import Fraction
from itertools import combinations

from hypothesis import given, settings
from hypothesis import strategies as st

from alphamedusa.alpha import (
    alpha_members,
    classify,
    finite_simplices_of_cells,
    is_gabriel_at,
    is_short_at,
)
from alphamedusa.triangulation import INF, Triangulation

F = Fraction


def pt(x, y, z):
    return (F(x), F(y), F(z))


def sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def solve(mat, rhs):
    """Gaussian elimination over Fraction; mat is square and regular."""
    n = len(rhs)
    m = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        inv = m[col][col]
        m[col] = [x / inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


def circumball(pts):
    """Center and squared radius of the smallest ball with pts on its
    boundary (the center lies in the affine hull)."""
    p0 = pts[0]
    basis = [sub(p, p0) for p in pts[1:]]
    if not basis:
        return p0, F(0)
    gram = [[2 * dot(a, b) for b in basis] for a in basis]
    rhs = [dot(b, b) for b in basis]
    xs = solve(gram, rhs)
    offset = tuple(
        sum(x * b[i] for x, b in zip(xs, basis)) for i in range(3)
    )
    center = tuple(c + o for c, o in zip(p0, offset))
    return center, dot(offset, offset)


def brute_members(points, cells, alpha_sq):
    """Short-and-Gabriel simplices plus their downward closure."""
    members = set()
    for s in finite_simplices_of_cells(cells):
        pts = [points[v] for v in s]
        center, r_sq = circumball(pts)
        if r_sq > alpha_sq:
            continue
        if any(
            dot(sub(points[w], center), sub(points[w], center)) < r_sq
            for w in points
            if w not in s
        ):
            continue
        members.add(s)
        for k in range(2, len(s)):
            members.update(combinations(s, k))
    return members


def random_points(seed, n, span=20, den=8):
    rng = random.Random(seed)
    points = {}
    while len(points) < n:
        p = tuple(
            F(rng.randrange(-span * den, span * den + 1), den)
            for _ in range(3)
        )
        if p not in points.values():
            points[len(points)] = p
    return points


CORNER_TET = {
    0: pt(0, 0, 0),
    1: pt(1, 0, 0),
    2: pt(0, 1, 0),
    3: pt(0, 0, 1),
}


def test_huge_alpha_gives_full_complex():
    points = random_points(3, 12)
    tri = Triangulation.build(points)
    simplices = finite_simplices_of_cells(tri.cells)
    biggest = max(circumball([points[v] for v in s])[1] for s in simplices)
    assert alpha_members(points, tri.cells, biggest + 1) == simplices


def test_tiny_alpha_gives_vertices_only():
    points = random_points(4, 12)
    tri = Triangulation.build(points)
    shortest = min(
        dot(sub(points[a], points[b]), sub(points[a], points[b]))
        for a in points
        for b in points
        if a < b
    )
    assert alpha_members(points, tri.cells, F(shortest, 5)) == set()


def test_corner_tet_boundary_cases():
    # alpha^2 = 1/2: the three hypotenuse edges have circumradius^2
    # exactly 1/2 (short uses <=) and the origin lies exactly on their
    # diametral spheres (Gabriel excludes only strict interior points)
    tri = Triangulation.build(CORNER_TET)
    members = alpha_members(CORNER_TET, tri.cells, F(1, 2))
    edges = set(combinations(range(4), 2))
    corner_triangles = {(0, 1, 2), (0, 1, 3), (0, 2, 3)}
    assert members == edges | corner_triangles


def test_short_and_gabriel_spot_values():
    assert is_short_at(CORNER_TET, (1, 2), F(1, 2))
    assert not is_short_at(CORNER_TET, (1, 2), F(49, 100))
    assert is_gabriel_at(CORNER_TET, (1, 2))
    # vertex 0 moved next to the midpoint of (1,2) lands strictly inside
    squeezed = dict(CORNER_TET)
    squeezed[0] = pt(F(2, 5), F(2, 5), 0)
    assert not is_gabriel_at(squeezed, (1, 2))


def test_random_instances_match_bruteforce():
    for seed in range(8):
        points = random_points(seed + 100, 15)
        tri = Triangulation.build(points)
        radii = sorted(
            circumball([points[v] for v in s])[1]
            for s in finite_simplices_of_cells(tri.cells)
            if len(s) == 3
        )
        alpha_sq = radii[len(radii) // 2]  # midscale, exercises both sides
        got = alpha_members(points, tri.cells, alpha_sq)
        assert got == brute_members(points, tri.cells, alpha_sq)


def test_membership_closed_under_faces():
    points = random_points(77, 15)
    tri = Triangulation.build(points)
    flags = classify(points, tri.cells, F(9, 2))
    members = flags.members()
    for s in members:
        for k in range(2, len(s)):
            for face in combinations(s, k):
                assert face in members
    for s, is_in in flags.in_alpha.items():
        if is_in:
            assert flags.short[s]
        if len(s) == 4:
            assert is_in == flags.short[s]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(6, 10))
def test_property_matches_bruteforce(seed, n):
    points = random_points(seed, n, span=6, den=4)
    try:
        tri = Triangulation.build(points)
    except Exception:
        return  # degenerate draws are the triangulation module's concern
    alpha_sq = F(seed % 40 + 1, 8)
    got = alpha_members(points, tri.cells, alpha_sq)
    assert got == brute_members(points, tri.cells, alpha_sq)
