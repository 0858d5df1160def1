"""Space-time multi-nerve bookkeeping: active cells and finished output.

Each cell is an abstract simplex on trajectory ids with a lifetime
interval.  Between events the active list mirrors the alpha complex;
flips, insertions and deletions additionally emit geometrically
degenerate fill cells with zero-length lifetime so that the stacked
complex stays connected where prisms fail to be face-to-face.

Lifetime endpoints are exact: rationals for structural events, algebraic
reals for flip and radius times.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Union

from .errors import MedusaInvariantError
from .roots import EQ, GT, LT, AlgebraicReal, compare

Time = Union[Fraction, AlgebraicReal]
Verts = tuple[int, ...]

INITIAL = "INITIAL"
RADIUS = "RADIUS"
FLIP_FILL = "FLIP_FILL"
INSERT_FILL = "INSERT_FILL"
DELETE_FILL = "DELETE_FILL"
FINAL = "FINAL"

FILL_ORIGINS = (FLIP_FILL, INSERT_FILL, DELETE_FILL)


@dataclass
class MedusaCell:
    vertex_ids: Verts
    birth: Time
    death: Time
    origin: str

    @property
    def dim(self) -> int:
        return len(self.vertex_ids) - 1

    def is_fill(self) -> bool:
        return self.origin in FILL_ORIGINS


class MedusaBuilder:
    """Active/output lists updated at every event of the kinetic run."""

    def __init__(self) -> None:
        self.active: dict[Verts, tuple[Time, str]] = {}
        self.output: list[MedusaCell] = []
        self._finalized = False

    # ------------------------------------------------------------------

    def open(self, verts: Verts, t: Time, cause: str) -> None:
        if verts in self.active:
            raise MedusaInvariantError(
                f"simplex {verts} opened while already active"
            )
        self.active[verts] = (t, cause)

    def close(self, verts: Verts, t: Time) -> None:
        entry = self.active.pop(verts, None)
        if entry is None:
            raise MedusaInvariantError(
                f"simplex {verts} closed while not active"
            )
        birth, cause = entry
        self.output.append(MedusaCell(verts, birth, t, cause))

    def fill(self, verts: Verts, t: Time, origin: str) -> None:
        if origin not in FILL_ORIGINS:
            raise MedusaInvariantError(f"{origin} is not a fill origin")
        self.output.append(MedusaCell(verts, t, t, origin))

    def finalize(self, end: Time = Fraction(1)) -> list[MedusaCell]:
        if self._finalized:
            raise MedusaInvariantError("medusa already finalized")
        for verts in sorted(self.active):
            birth, _ = self.active[verts]
            self.output.append(MedusaCell(verts, birth, end, FINAL))
        self.active.clear()
        self.output.sort(key=cmp_to_key(_cell_cmp))
        self._finalized = True
        return self.output

    # ------------------------------------------------------------------

    def active_members(self, max_dim: int = 3) -> set[Verts]:
        return {v for v in self.active if len(v) <= max_dim + 1}

    def check_state(self, t: Time) -> None:
        """Output cells are finished at t, active cells started by t."""
        for cell in self.output:
            if compare(cell.death, t) == GT:
                raise MedusaInvariantError(
                    f"output cell {cell.vertex_ids} dies at "
                    f"{cell.death!r} after current time"
                )
        for verts, (birth, _) in self.active.items():
            if compare(birth, t) == GT:
                raise MedusaInvariantError(
                    f"active cell {verts} born at {birth!r} in the future"
                )


def _cell_cmp(a: MedusaCell, b: MedusaCell) -> int:
    c = compare(a.birth, b.birth)
    if c != EQ:
        return -1 if c == LT else 1
    if a.vertex_ids < b.vertex_ids:
        return -1
    if a.vertex_ids > b.vertex_ids:
        return 1
    c = compare(a.death, b.death)
    return -1 if c == LT else (0 if c == EQ else 1)


def check_disjoint_lifetimes(cells: list[MedusaCell]) -> None:
    """Distinct copies of one simplex must not share any instant."""
    by_verts: dict[Verts, list[MedusaCell]] = {}
    for cell in cells:
        by_verts.setdefault(cell.vertex_ids, []).append(cell)
    for verts, group in by_verts.items():
        group = sorted(group, key=cmp_to_key(_cell_cmp))
        for prev, nxt in zip(group, group[1:]):
            if compare(nxt.birth, prev.death) != GT:
                raise MedusaInvariantError(
                    f"copies of {verts} overlap: "
                    f"[{prev.birth!r}, {prev.death!r}] and "
                    f"[{nxt.birth!r}, {nxt.death!r}]"
                )
