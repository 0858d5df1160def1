"""Delaunay triangulation on the 3-sphere with a vertex at infinity.

The triangulation is stored as a set of 4-tuples of vertex ids, sorted
ascending.  The sentinel ``INF = -1`` marks the vertex at infinity; every
convex-hull facet is covered by exactly one cell containing ``INF``, so
each triangle of the complex has exactly two incident cells and hull
special cases disappear.

All predicates are exact over rationals.  Construction is incremental
(conflict region + star retriangulation); deletion rebuilds the
triangulation without the vertex and diffs the cell sets, which is
correct because removing a point never invalidates a Delaunay cell that
does not use it.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator

from .errors import DegenerateInput, DuplicatePoint, NoSuchVertex
from .motion import Point
from .predicates import cross, insphere5, orient4, side_of_circumball, sub

INF = -1

Cell = tuple[int, int, int, int]
Facet = tuple[int, int, int]

PointMap = dict[int, Point]


def cell_of(verts: Iterable[int]) -> Cell:
    a, b, c, d = sorted(verts)
    return (a, b, c, d)


def facets_of(cell: Cell) -> Iterator[Facet]:
    a, b, c, d = cell
    yield (b, c, d)
    yield (a, c, d)
    yield (a, b, d)
    yield (a, b, c)


def is_finite(simplex: tuple[int, ...]) -> bool:
    # sorted tuples put INF first when present
    return simplex[0] != INF


class Triangulation:
    """Exact Delaunay triangulation of >= 4 points in general position."""

    def __init__(self, cells: set[Cell] | None = None) -> None:
        self.cells: set[Cell] = cells if cells is not None else set()

    # ------------------------------------------------------------------
    # construction

    @classmethod
    def build(cls, points: PointMap) -> "Triangulation":
        if len(points) < 4:
            raise DegenerateInput("need at least 4 points to triangulate")
        seen: dict[Point, int] = {}
        for vid in sorted(points):
            p = points[vid]
            if p in seen:
                raise DuplicatePoint(
                    f"vertices {seen[p]} and {vid} coincide at {p}"
                )
            seen[p] = vid

        ids = sorted(points)
        a = ids[0]
        b = ids[1]
        c = next(
            (
                v
                for v in ids[2:]
                if cross(sub(points[v], points[a]), sub(points[b], points[a]))
                != (0, 0, 0)
            ),
            None,
        )
        if c is None:
            raise DegenerateInput("all points are collinear")
        rest = [v for v in ids[2:] if v != c]
        d = next(
            (
                v
                for v in rest
                if orient4(points[a], points[b], points[c], points[v]) != 0
            ),
            None,
        )
        if d is None:
            raise DegenerateInput("all points are coplanar")

        tri = cls()
        first = cell_of((a, b, c, d))
        tri.cells.add(first)
        for f in facets_of(first):
            tri.cells.add(cell_of(f + (INF,)))
        for v in ids:
            if v in (a, b, c, d):
                continue
            tri.insert(points, v)
        return tri

    # ------------------------------------------------------------------
    # queries

    def facet_map(self) -> dict[Facet, list[Cell]]:
        fm: dict[Facet, list[Cell]] = {}
        for cell in self.cells:
            for f in facets_of(cell):
                fm.setdefault(f, []).append(cell)
        return fm

    def vertex_ids(self) -> set[int]:
        out: set[int] = set()
        for cell in self.cells:
            out.update(cell)
        out.discard(INF)
        return out

    def finite_cells(self) -> list[Cell]:
        return sorted(c for c in self.cells if is_finite(c))

    def finite_simplices(self) -> set[tuple[int, ...]]:
        """All finite edges, triangles and tetrahedra of the complex."""
        out: set[tuple[int, ...]] = set()
        for cell in self.cells:
            verts = [v for v in cell if v != INF]
            for k in (2, 3, 4):
                for sub_ in combinations(verts, k):
                    out.add(sub_)
        return out

    # ------------------------------------------------------------------
    # conflict location

    def _infinite_conflict(
        self, points: PointMap, cell: Cell, p: Point
    ) -> bool:
        fa, fb, fc = (v for v in cell if v != INF)
        pa, pb, pc = points[fa], points[fb], points[fc]
        # apex of the unique finite neighbor fixes the inside orientation
        neighbor = self._neighbor(cell, (fa, fb, fc))
        w = next(v for v in neighbor if v not in (fa, fb, fc, INF))
        s_ref = orient4(pa, pb, pc, points[w])
        if s_ref == 0:
            raise DegenerateInput(
                f"flat finite cell {neighbor} adjacent to hull facet"
            )
        s = orient4(pa, pb, pc, p)
        if s != 0:
            return s * s_ref < 0
        # coplanar with the hull facet: conflict iff strictly inside its
        # circumdisk; on the circle is cospherical with the neighbor cell
        side = side_of_circumball((pa, pb, pc), p)
        if side == 0:
            raise DegenerateInput(
                f"point lies on the circumcircle of hull facet "
                f"{(fa, fb, fc)}"
            )
        return side < 0

    def _neighbor(self, cell: Cell, facet: Facet) -> Cell:
        fs = set(facet)
        for other in self.cells:
            if other != cell and fs.issubset(other):
                return other
        raise AssertionError(f"facet {facet} has no second cell")

    def conflicts(self, points: PointMap, p: Point) -> set[Cell]:
        """Cells whose circumball strictly contains p (open conflict zone).

        Raises DegenerateInput when p is exactly cospherical with a cell,
        since the updated triangulation would not be unique.
        """
        out: set[Cell] = set()
        for cell in self.cells:
            if is_finite(cell):
                pts = tuple(points[v] for v in cell)
                s_o = orient4(*pts)
                s_i = insphere5(*pts, p)
                if s_i == 0:
                    raise DegenerateInput(
                        f"point lies on the circumsphere of cell {cell}"
                    )
                if s_i * s_o < 0:
                    out.add(cell)
            else:
                if self._infinite_conflict(points, cell, p):
                    out.add(cell)
        return out

    # ------------------------------------------------------------------
    # updates

    def insert(
        self, points: PointMap, new_id: int
    ) -> tuple[list[Cell], list[Cell]]:
        """Insert points[new_id]; returns (removed, created) cell lists."""
        p = points[new_id]
        for vid, q in points.items():
            if vid != new_id and q == p:
                raise DuplicatePoint(
                    f"vertex {new_id} coincides with vertex {vid} at {p}"
                )
        conflict = self.conflicts(points, p)
        if not conflict:
            raise DegenerateInput(
                f"vertex {new_id} conflicts with no cell; degenerate position"
            )

        count: dict[Facet, int] = {}
        for cell in conflict:
            for f in facets_of(cell):
                count[f] = count.get(f, 0) + 1
        boundary = [f for f, c in count.items() if c == 1]

        created: list[Cell] = []
        for f in boundary:
            cell = cell_of(f + (new_id,))
            if is_finite(cell):
                pts = tuple(points[v] for v in cell)
                if orient4(*pts) == 0:
                    raise DegenerateInput(
                        f"inserting vertex {new_id} creates flat cell {cell}"
                    )
            created.append(cell)

        self.cells -= conflict
        self.cells.update(created)
        return sorted(conflict), sorted(created)

    def remove(
        self, points: PointMap, vid: int
    ) -> tuple[list[Cell], list[Cell]]:
        """Remove a vertex; returns (removed, created) cell lists.

        The hole is retriangulated by rebuilding the Delaunay
        triangulation of the remaining points and diffing cell sets.
        """
        if vid not in points:
            raise NoSuchVertex(f"vertex {vid} is not in the triangulation")
        if len(points) - 1 < 4:
            raise DegenerateInput("cannot delete: fewer than 4 points remain")
        removed = sorted(c for c in self.cells if vid in c)
        remaining = {w: q for w, q in points.items() if w != vid}
        rebuilt = Triangulation.build(remaining)
        survivors = self.cells - set(removed)
        if not survivors <= rebuilt.cells:
            raise AssertionError(
                "survivor cell lost Delaunay property on deletion"
            )
        created = sorted(rebuilt.cells - survivors)
        self.cells = rebuilt.cells
        return removed, created

    # ------------------------------------------------------------------
    # validation

    def check_structure(self, points: PointMap | None = None) -> None:
        """Cheap combinatorial (and optionally geometric) sanity check."""
        for cell in self.cells:
            if len(set(cell)) != 4:
                raise AssertionError(f"cell {cell} has repeated vertices")
            if cell != tuple(sorted(cell)):
                raise AssertionError(f"cell {cell} is not sorted")
        for f, cs in self.facet_map().items():
            if len(cs) != 2:
                raise AssertionError(
                    f"facet {f} has {len(cs)} incident cells, expected 2"
                )
        if points is not None:
            for cell in self.finite_cells():
                pts = tuple(points[v] for v in cell)
                if orient4(*pts) == 0:
                    raise AssertionError(f"flat finite cell {cell}")
