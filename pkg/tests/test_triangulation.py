"""Delaunay triangulation against a brute-force empty-sphere oracle."""

import random
from fractions import Fraction
from itertools import combinations

import pytest

from alphamedusa.errors import DegenerateInput, DuplicatePoint, NoSuchVertex
from alphamedusa.predicates import insphere5, orient4
from alphamedusa.triangulation import INF, Triangulation, cell_of

F = Fraction


def pt(x, y, z):
    return (F(x), F(y), F(z))


def delaunay_oracle(points):
    """Every 4-subset with an exactly empty circumsphere, plus hull cells."""
    ids = sorted(points)
    cells = set()
    for quad in combinations(ids, 4):
        pts = [points[v] for v in quad]
        s_o = orient4(*pts)
        if s_o == 0:
            continue
        empty = True
        for w in ids:
            if w in quad:
                continue
            s_i = insphere5(*pts, points[w])
            if s_i == 0 or s_i * s_o < 0:
                empty = False
                break
        if empty:
            cells.add(quad)
    for tri in combinations(ids, 3):
        pts = [points[v] for v in tri]
        signs = set()
        for w in ids:
            if w in tri:
                continue
            v = orient4(*pts, points[w])
            signs.add((v > 0) - (v < 0))
        if 0 not in signs and len(signs) == 1:
            cells.add(cell_of(tri + (INF,)))
    return cells


def random_points(seed, n, span=40, den=16):
    rng = random.Random(seed)
    points = {}
    used = set()
    vid = 0
    while len(points) < n:
        p = tuple(
            F(rng.randrange(-span * den, span * den + 1), den)
            for _ in range(3)
        )
        if p in used:
            continue
        used.add(p)
        points[vid] = p
        vid += 1
    return points


REGULAR_TET = {
    0: pt(0, 0, 0),
    1: pt(1, 1, 0),
    2: pt(1, 0, 1),
    3: pt(0, 1, 1),
}

CORNER_TET = {
    0: pt(0, 0, 0),
    1: pt(2, 0, 0),
    2: pt(0, 2, 0),
    3: pt(0, 0, 2),
}


def test_regular_tetrahedron_cells():
    tri = Triangulation.build(REGULAR_TET)
    finite = tri.finite_cells()
    assert finite == [(0, 1, 2, 3)]
    assert len(tri.cells) == 5  # one finite + four hull cells
    assert all(INF in c for c in tri.cells if c != (0, 1, 2, 3))
    tri.check_structure(REGULAR_TET)
    assert tri.cells == delaunay_oracle(REGULAR_TET)


def test_five_points_far_outside_matches_oracle():
    points = dict(CORNER_TET)
    points[4] = pt(3, 3, 3)
    tri = Triangulation.build(points)
    tri.check_structure(points)
    assert tri.cells == delaunay_oracle(points)
    assert len(tri.finite_cells()) in (2, 3)


def test_five_points_share_triangle():
    points = dict(CORNER_TET)
    points[4] = pt(3, 3, 3)
    tri = Triangulation.build(points)
    finite = tri.finite_cells()
    if len(finite) == 2:
        shared = set(finite[0]) & set(finite[1])
        assert len(shared) == 3
    else:
        shared = set(finite[0]) & set(finite[1]) & set(finite[2])
        assert len(shared) == 2


@pytest.mark.parametrize("seed", [1, 2, 7, 20260815])
def test_random_points_match_oracle(seed):
    points = random_points(seed, 20)
    tri = Triangulation.build(points)
    tri.check_structure(points)
    assert tri.cells == delaunay_oracle(points)


def test_insert_equals_rebuild():
    points = random_points(3, 12)
    tri = Triangulation.build(points)
    extra = pt(F(7, 8), F(-11, 8), F(5, 8))
    points[99] = extra
    removed, created = tri.insert(points, 99)
    tri.check_structure(points)
    assert tri.cells == Triangulation.build(points).cells
    assert all(99 not in c for c in removed)
    assert all(99 in c for c in created)


def test_insert_centroid_of_single_tet():
    points = dict(CORNER_TET)
    tri = Triangulation.build(points)
    points[4] = pt(F(1, 2), F(1, 2), F(1, 2))
    removed, created = tri.insert(points, 4)
    assert removed == [(0, 1, 2, 3)]
    assert len(created) == 4
    assert all(4 in c for c in created)
    tri.check_structure(points)


def test_insert_far_outside_conflicts_only_infinite():
    points = dict(CORNER_TET)
    tri = Triangulation.build(points)
    far = pt(50, 60, 70)
    conflict = tri.conflicts(points, far)
    assert conflict
    assert all(INF in c for c in conflict)


def test_insert_duplicate_rejected():
    points = dict(CORNER_TET)
    tri = Triangulation.build(points)
    points[4] = pt(2, 0, 0)
    with pytest.raises(DuplicatePoint):
        tri.insert(points, 4)


def test_insert_cospherical_rejected():
    points = dict(CORNER_TET)
    tri = Triangulation.build(points)
    # circumsphere of the corner tet: center (1,1,1), r^2 = 3
    points[4] = pt(2, 2, 0)
    with pytest.raises(DegenerateInput):
        tri.insert(points, 4)


def test_build_rejects_coplanar():
    points = {
        0: pt(0, 0, 0),
        1: pt(1, 0, 0),
        2: pt(0, 1, 0),
        3: pt(1, 1, 0),
    }
    with pytest.raises(DegenerateInput):
        Triangulation.build(points)


def test_build_rejects_duplicates():
    points = dict(CORNER_TET)
    points[4] = pt(0, 0, 0)
    with pytest.raises(DuplicatePoint):
        Triangulation.build(points)


@pytest.mark.parametrize("seed", [5, 11])
def test_remove_equals_rebuild(seed):
    points = random_points(seed, 14)
    tri = Triangulation.build(points)
    victim = sorted(points)[seed % 14]
    removed, created = tri.remove(points, victim)
    assert all(victim in c for c in removed)
    assert all(victim not in c for c in created)
    del points[victim]
    tri.check_structure(points)
    assert tri.cells == delaunay_oracle(points)


def test_remove_unknown_vertex():
    points = dict(CORNER_TET)
    points[4] = pt(3, 3, 3)
    tri = Triangulation.build(points)
    with pytest.raises(NoSuchVertex):
        tri.remove(points, 77)


def test_remove_below_four_points():
    points = dict(CORNER_TET)
    tri = Triangulation.build(points)
    with pytest.raises(DegenerateInput):
        tri.remove(points, 0)


def test_insert_delete_round_trip():
    points = random_points(9, 10)
    tri = Triangulation.build(points)
    before = set(tri.cells)
    points[50] = pt(F(1, 4), F(3, 4), F(-1, 4))
    tri.insert(points, 50)
    tri.remove(points, 50)
    del points[50]
    assert tri.cells == before
