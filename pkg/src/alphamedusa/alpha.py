"""Static alpha-complex classification over a Delaunay triangulation.

A finite Delaunay simplex belongs to the alpha complex for radius
``alpha0`` iff it is short (circumradius <= alpha0) and Gabriel
(circumball interior empty of input points), or it is a face of such a
simplex.  Tetrahedra are always Gabriel, so for them short and member
coincide.  Vertices of active points always belong to the complex and
are not tracked here.

Everything below is exact rational arithmetic at a fixed time; the
kinetic engine uses it at rational times (initialization, insertions,
deletions) and the test oracles use it everywhere.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable

from .predicates import circumradius_sq, side_of_circumball
from .triangulation import INF, Cell, PointMap

Simplex = tuple[int, ...]


def finite_simplices_of_cells(cells: Iterable[Cell]) -> set[Simplex]:
    out: set[Simplex] = set()
    for cell in cells:
        verts = [v for v in cell if v != INF]
        for k in (2, 3, 4):
            for s in combinations(verts, k):
                out.add(s)
    return out


class AlphaFlags:
    """Per-simplex short / in_alpha flags for dims 1..3."""

    __slots__ = ("short", "in_alpha")

    def __init__(
        self, short: dict[Simplex, bool], in_alpha: dict[Simplex, bool]
    ) -> None:
        self.short = short
        self.in_alpha = in_alpha

    def members(self) -> set[Simplex]:
        return {s for s, flag in self.in_alpha.items() if flag}


def is_short_at(points: PointMap, simplex: Simplex, alpha_sq: Fraction) -> bool:
    return circumradius_sq(tuple(points[v] for v in simplex)) <= alpha_sq


def is_gabriel_at(points: PointMap, simplex: Simplex) -> bool:
    pts = tuple(points[v] for v in simplex)
    for w, q in points.items():
        if w in simplex:
            continue
        if side_of_circumball(pts, q) < 0:
            return False
    return True


def classify(
    points: PointMap, cells: Iterable[Cell], alpha_sq: Fraction
) -> AlphaFlags:
    """Short&Gabriel classification of every finite simplex of the cells."""
    simplices = finite_simplices_of_cells(cells)
    short: dict[Simplex, bool] = {
        s: is_short_at(points, s, alpha_sq) for s in simplices
    }

    has_member_coface: dict[Simplex, bool] = {s: False for s in simplices}
    in_alpha: dict[Simplex, bool] = {}
    # top-down: a face inherits membership from any in-alpha coface,
    # otherwise it needs its own Gabriel ball
    for dim in (3, 2, 1):
        for s in simplices:
            if len(s) != dim + 1:
                continue
            member = short[s] and (
                dim == 3  # Delaunay tetrahedra are Gabriel
                or has_member_coface[s]
                or is_gabriel_at(points, s)
            )
            in_alpha[s] = member
            if member and dim > 1:
                for f in combinations(s, dim):
                    has_member_coface[f] = True
    return AlphaFlags(short, in_alpha)


def alpha_members(
    points: PointMap, cells: Iterable[Cell], alpha_sq: Fraction
) -> set[Simplex]:
    return classify(points, cells, alpha_sq).members()
