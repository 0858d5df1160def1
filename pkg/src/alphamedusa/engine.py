"""Event-driven maintenance of a moving Delaunay triangulation and its
fixed-radius alpha complex over the time interval [0, 1].

The engine holds the triangulation of the currently active points, a
short / in-alpha flag per finite simplex, and a priority queue of
pending events ordered by exact comparison of event times:

* flip certificates, one per internal triangle, whose roots are the
  co-sphericity (or hull co-planarity) times of the five incident
  vertices;
* radius certificates, one per finite simplex that survives pruning,
  whose roots are the times its circumradius crosses alpha0;
* structural events at known rational times: bends of a trajectory,
  insertions at a trajectory's domain start, deletions at its end.

Every combinatorial or alpha-complex change is mirrored into a
MedusaBuilder, which accumulates the space-time cells.  All arithmetic
is exact; event times are algebraic numbers and the queue compares them
without rounding.  Inputs that violate the distinct-events or
general-position assumptions abort with a DegeneracyError subclass.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Optional, Union

from .alpha import classify
from .certificates import (
    flip_certificate_4,
    flip_certificate_5,
    gabriel_poly_edge,
    gabriel_poly_triangle,
    radius_certificate,
    radius_certificate_tet,
    triangle_collinearity_poly,
)
from .errors import (
    DegenerateInput,
    MedusaInvariantError,
    SimultaneousEvents,
    UnflippableEvent,
)
from .medusa import (
    DELETE_FILL,
    FLIP_FILL,
    INITIAL,
    INSERT_FILL,
    RADIUS,
    MedusaBuilder,
)
from .motion import LinearMotion, Trajectory
from .polynomial import Poly
from .roots import (
    EQ,
    GT,
    LT,
    AlgebraicReal,
    RootCache,
    compare,
    isolate_roots,
    root_transition,
    sign_at,
)
from .triangulation import INF, Cell, Facet, Triangulation, cell_of, facets_of

Time = Union[Fraction, AlgebraicReal]
Simplex = tuple[int, ...]

_T0 = Fraction(0)
_T1 = Fraction(1)

# structural events at the same instant are processed in this order;
# certificate events never share an instant with anything (the run
# aborts), so their relative rank is irrelevant
_RANK = {"DELETE": 0, "BEND": 1, "INSERT": 2, "FLIP": 3, "RADIUS": 4}

_STRUCTURAL = ("DELETE", "BEND", "INSERT")


@dataclass
class EngineConfig:
    """Feature toggles.  All four default to on; switching any of them
    off must not change the event sequence or the resulting medusa,
    only the amount of work done."""

    prune_certificates: bool = True
    degree6_triangle: bool = True
    descartes_filter: bool = True
    root_cache: bool = True


@dataclass
class EventCounters:
    flips: int = 0
    radius_events: int = 0
    bending_events: int = 0
    insertions: int = 0
    deletions: int = 0
    certificates_built: int = 0
    certificates_filtered: int = 0
    cache_hits: int = 0
    # not part of the headline set, but useful for diagnostics
    flip_certificates_built: int = 0
    certificates_no_root: int = 0
    spurious_roots_skipped: int = 0

    def as_dict(self) -> dict:
        return {
            "flips": self.flips,
            "radius_events": self.radius_events,
            "bending_events": self.bending_events,
            "insertions": self.insertions,
            "deletions": self.deletions,
            "certificates_built": self.certificates_built,
            "certificates_filtered": self.certificates_filtered,
            "cache_hits": self.cache_hits,
            "flip_certificates_built": self.flip_certificates_built,
            "certificates_no_root": self.certificates_no_root,
            "spurious_roots_skipped": self.spurious_roots_skipped,
        }


@dataclass(eq=True)
class EventRecord:
    """One processed event, for logs and equivalence tests."""

    kind: str
    time: Time
    anchor: tuple


@dataclass
class _FlipCert:
    facet: Facet
    fiveset: tuple[int, ...]
    poly: Poly
    token: int
    root: Optional[AlgebraicReal]


@dataclass
class _RadiusCert:
    simplex: Simplex
    poly: Poly
    token: int
    roots: list[AlgebraicReal]
    idx: int


class _Entry:
    """Heap entry; orders by exact time, then structural rank, then
    anchor, so equal-rank ties break deterministically."""

    __slots__ = ("time", "kind", "anchor", "token")

    def __init__(self, time: Time, kind: str, anchor: tuple, token: int):
        self.time = time
        self.kind = kind
        self.anchor = anchor
        self.token = token

    def __lt__(self, other: "_Entry") -> bool:
        c = compare(self.time, other.time)
        if c != EQ:
            return c == LT
        if _RANK[self.kind] != _RANK[other.kind]:
            return _RANK[self.kind] < _RANK[other.kind]
        return self.anchor < other.anchor

    def __repr__(self) -> str:
        return f"_Entry({self.kind} {self.anchor} at {self.time!r})"


def _skey(s: Simplex) -> tuple:
    return (len(s), s)


def _proper_faces(s: Simplex) -> list[Simplex]:
    out: list[Simplex] = []
    for k in range(2, len(s)):
        out.extend(combinations(s, k))
    return out


class KineticEngine:
    """Runs the kinetic simulation for a set of piecewise-linear
    trajectories and a fixed squared radius alpha0^2."""

    def __init__(
        self,
        trajectories: Iterable[Trajectory],
        alpha_sq,
        config: Optional[EngineConfig] = None,
    ):
        self.config = config or EngineConfig()
        self.alpha_sq = Fraction(alpha_sq)
        if self.alpha_sq <= 0:
            raise ValueError("alpha0^2 must be positive")
        self.trajectories: dict[int, Trajectory] = {}
        for tr in trajectories:
            if tr.tid in self.trajectories:
                raise ValueError(f"duplicate trajectory id {tr.tid}")
            if not (_T0 <= tr.domain_start < tr.domain_end <= _T1):
                raise ValueError(
                    f"trajectory {tr.tid} domain outside [0, 1]"
                )
            self.trajectories[tr.tid] = tr

        self.counters = EventCounters()
        self.medusa = MedusaBuilder()
        self.hooks: list[Callable[["KineticEngine", list[EventRecord]], None]] = []
        self.event_log: list[EventRecord] = []
        self.t_now: Time = _T0
        self.epoch_lo: Fraction = _T0
        self._kstats = {"filtered": 0, "no_root": 0}
        self._cache: Optional[RootCache] = (
            RootCache() if self.config.root_cache else None
        )
        self._heap: list[_Entry] = []
        self._token_seq = 0
        self._flip_certs: dict[Facet, _FlipCert] = {}
        self._radius_certs: dict[Simplex, _RadiusCert] = {}
        self._med_ops: Optional[dict[tuple, list]] = None
        self._finalized = False

        self._empty = not self.trajectories
        if self._empty:
            self.tri = Triangulation(set())
            self.motions = {}
            self.segment_end = {}
            self.short = {}
            self.in_alpha = {}
            self._vcells = {}
            return

        active0 = sorted(
            tid for tid, tr in self.trajectories.items() if tr.domain_start == 0
        )
        if len(active0) < 4:
            raise DegenerateInput(
                "fewer than four trajectories are active at t=0"
            )
        self.motions: dict[int, LinearMotion] = {}
        self.segment_end: dict[int, Fraction] = {}
        for vid in active0:
            m = self.trajectories[vid].segment(_T0)
            self.motions[vid] = m
            self.segment_end[vid] = m.t1

        points0 = self._positions(_T0)
        self.tri = Triangulation.build(points0)
        self._vcells: dict[int, set[Cell]] = {}
        for cell in self.tri.cells:
            for v in cell:
                if v != INF:
                    self._vcells.setdefault(v, set()).add(cell)

        flags = classify(points0, self.tri.cells, self.alpha_sq)
        self.short: dict[Simplex, bool] = dict(flags.short)
        self.in_alpha: dict[Simplex, bool] = dict(flags.in_alpha)

        for vid in active0:
            self.medusa.open((vid,), _T0, INITIAL)
        for s in sorted(
            (s for s, v in self.in_alpha.items() if v), key=_skey
        ):
            self.medusa.open(s, _T0, INITIAL)

        for tid in sorted(self.trajectories):
            tr = self.trajectories[tid]
            if tr.domain_start > 0:
                self._push(tr.domain_start, "INSERT", (tid,), -1)
            if tr.domain_end < 1:
                self._push(tr.domain_end, "DELETE", (tid,), -1)
            for tb in tr.interior_breakpoints():
                self._push(tb, "BEND", (tid,), -1)

        if self._cache is not None:
            self._cache.set_epoch(self._epoch_end())
        for facet in sorted(self._all_facets()):
            self._install_flip(facet, _T0)
        for s in sorted(self.short, key=_skey):
            if self._needs_radius_cert(s):
                self._install_radius(s, _T0)

    # ------------------------------------------------------------------
    # public driving interface

    def run(self) -> list:
        """Process every event strictly inside (0, 1), then finalize and
        return the medusa cells."""
        self.run_to(None)
        return self.finalize()

    def run_to(self, t_stop) -> None:
        """Process all events with time strictly before t_stop (or all
        events before 1 when t_stop is None)."""
        if self._empty:
            return
        while self._advance(t_stop):
            pass

    def step(self) -> list[EventRecord]:
        """Process one event group; returns its records (empty when the
        queue is exhausted or only spurious roots were consumed)."""
        if self._empty:
            return []
        before = len(self.event_log)
        self._advance(None)
        return self.event_log[before:]

    def next_event_time(self) -> Optional[Time]:
        h = self._heap
        while h and not self._valid(h[0]):
            heapq.heappop(h)
        if not h:
            return None
        t = h[0].time
        if compare(t, _T1) != LT:
            return None
        return t

    def finalize(self) -> list:
        if self._finalized:
            raise MedusaInvariantError("finalize called twice")
        self._finalized = True
        return self.medusa.finalize(_T1)

    def stats(self) -> EventCounters:
        self.counters.certificates_filtered = self._kstats["filtered"]
        self.counters.certificates_no_root = self._kstats["no_root"]
        self.counters.cache_hits = self._cache.hits if self._cache else 0
        return self.counters

    def alpha_members(self) -> list[Simplex]:
        return sorted((s for s, v in self.in_alpha.items() if v), key=_skey)

    def positions_at(self, t) -> dict:
        """Exact positions of the currently active points; t must lie
        between the last processed event and the next pending one."""
        return dict(self._positions(Fraction(t)))

    # ------------------------------------------------------------------
    # positions, adjacency, pruning rule

    def _positions(self, t: Fraction) -> dict:
        return {vid: m.position(t) for vid, m in self.motions.items()}

    def _epoch_end(self) -> Fraction:
        if not self.segment_end:
            return _T1
        return min(self.segment_end.values())

    def _cells_containing(self, s: Simplex) -> list[Cell]:
        finite = [v for v in s if v != INF]
        sets = [self._vcells.get(v) for v in finite]
        if any(x is None for x in sets):
            return []
        base = min(sets, key=len)
        if INF in s:
            return [c for c in base if all(v in c for v in s)]
        return [c for c in base if all(v in c for v in finite)]

    def _simplex_in_complex(self, s: Simplex) -> bool:
        return bool(self._cells_containing(s))

    def _cofaces(self, s: Simplex, codim1: bool = False) -> set[Simplex]:
        """Finite proper cofaces of s present in the complex."""
        out: set[Simplex] = set()
        for cell in self._cells_containing(s):
            rest = [v for v in cell if v != INF and v not in s]
            hi = 2 if codim1 else len(rest) + 1
            for k in range(1, hi):
                for extra in combinations(rest, k):
                    out.add(tuple(sorted(s + extra)))
        return out

    def _needs_radius_cert(self, s: Simplex) -> bool:
        """Pruning rule: skip the certificate when some codim-1 face is
        non-short or some codim+1 coface is short.  Either condition
        forces another simplex's radius event to come first (the
        circumradius is monotone along the face order)."""
        if not self.config.prune_certificates:
            return True
        if len(s) > 2:
            for f in combinations(s, len(s) - 1):
                if not self.short[f]:
                    return False
        if len(s) < 4:
            for c in self._cofaces(s, codim1=True):
                if self.short[c]:
                    return False
        return True

    def _all_facets(self) -> set[Facet]:
        out: set[Facet] = set()
        for cell in self.tri.cells:
            out.update(facets_of(cell))
        return out

    def _sync_cells(self, removed: Iterable[Cell], created: Iterable[Cell]) -> None:
        for cell in removed:
            for v in cell:
                if v != INF:
                    self._vcells[v].discard(cell)
        for cell in created:
            for v in cell:
                if v != INF:
                    self._vcells.setdefault(v, set()).add(cell)
        for v in [v for v, cs in self._vcells.items() if not cs]:
            del self._vcells[v]

    # ------------------------------------------------------------------
    # certificate installation

    def _next_token(self) -> int:
        self._token_seq += 1
        return self._token_seq

    def _push(self, time: Time, kind: str, anchor: tuple, token: int) -> None:
        heapq.heappush(self._heap, _Entry(time, kind, anchor, token))

    def _valid(self, e: _Entry) -> bool:
        if e.kind in _STRUCTURAL:
            return True
        if e.kind == "FLIP":
            cert = self._flip_certs.get(e.anchor)
        else:
            cert = self._radius_certs.get(e.anchor)
        return cert is not None and cert.token == e.token

    def _degenerate_now(self, at_event: bool, msg: str):
        # a zero sign while installing at a structural (rational) time
        # is an input degeneracy; at an event time two events coincide
        if at_event:
            raise SimultaneousEvents(msg)
        raise DegenerateInput(msg)

    def _isolate(self, poly: Poly, horizon: Fraction) -> list[AlgebraicReal]:
        return isolate_roots(
            poly,
            self.epoch_lo,
            horizon,
            self._cache,
            use_filter=self.config.descartes_filter,
            stats=self._kstats,
        )

    def _install_flip(self, facet: Facet, now: Time, at_event: bool = False) -> None:
        cells = self._cells_containing(facet)
        assert len(cells) == 2, f"facet {facet} has {len(cells)} cells"
        fiveset = tuple(sorted(set(cells[0]) | set(cells[1])))
        finite = [v for v in fiveset if v != INF]
        if INF in fiveset:
            poly = flip_certificate_4(tuple(self.motions[v] for v in finite))
        else:
            poly = flip_certificate_5(tuple(self.motions[v] for v in fiveset))
        if poly.is_zero():
            raise DegenerateInput(
                f"vertices {fiveset} stay co-spherical over a whole segment"
            )
        # certificates rebuilt at a flip vanish AT the flip (the created
        # cells share the five-set that just went co-spherical); only a
        # zero at a structural install time signals a degeneracy
        if not at_event and sign_at(poly, now) == 0:
            self._degenerate_now(
                False, f"vertices {fiveset} are co-spherical at t={now!r}"
            )
        horizon = min(self.segment_end[v] for v in finite)
        roots = self._isolate(poly, horizon)
        nxt = None
        for r in roots:
            if compare(r, now) == GT:
                nxt = r
                break
        token = self._next_token()
        self._flip_certs[facet] = _FlipCert(facet, fiveset, poly, token, nxt)
        self.counters.flip_certificates_built += 1
        if nxt is not None:
            self._push(nxt, "FLIP", facet, token)

    def _install_radius(self, s: Simplex, now: Time, at_event: bool = False) -> None:
        motions = tuple(self.motions[v] for v in s)
        poly = radius_certificate(
            motions, self.alpha_sq, triangle_deg6=self.config.degree6_triangle
        )
        if poly.is_zero():
            raise DegenerateInput(
                f"circumradius of {s} equals alpha0 over a whole segment"
            )
        if sign_at(poly, now) == 0:
            self._degenerate_now(
                at_event, f"circumradius of {s} equals alpha0 at t={now!r}"
            )
        horizon = min(self.segment_end[v] for v in s)
        roots = self._isolate(poly, horizon)
        idx = len(roots)
        for i, r in enumerate(roots):
            if compare(r, now) == GT:
                idx = i
                break
        token = self._next_token()
        self._radius_certs[s] = _RadiusCert(s, poly, token, roots, idx)
        self.counters.certificates_built += 1
        if idx < len(roots):
            self._push(roots[idx], "RADIUS", s, token)

    def _reconcile_radius(
        self, s: Simplex, now: Time, force: bool = False, at_event: bool = False
    ) -> None:
        """Install or drop the radius certificate of s so it matches the
        pruning rule; with force, rebuild even a kept one (used after a
        bend changed the motion of one of its vertices)."""
        exists = self._simplex_in_complex(s)
        want = exists and self._needs_radius_cert(s)
        have = s in self._radius_certs
        if have and (not want or force):
            del self._radius_certs[s]
            have = False
        if want and not have:
            self._install_radius(s, now, at_event=at_event)

    def _advance_radius(self, cert: _RadiusCert) -> None:
        cert.idx += 1
        if cert.idx < len(cert.roots):
            self._push(cert.roots[cert.idx], "RADIUS", cert.simplex, cert.token)

    # ------------------------------------------------------------------
    # event loop

    def _advance(self, t_stop) -> bool:
        h = self._heap
        while h and not self._valid(h[0]):
            heapq.heappop(h)
        if not h:
            return False
        tn = h[0].time
        if compare(tn, _T1) != LT:
            return False
        if t_stop is not None and compare(tn, t_stop) != LT:
            return False
        group = [heapq.heappop(h)]
        while h:
            while h and not self._valid(h[0]):
                heapq.heappop(h)
            if not h or compare(h[0].time, tn) != EQ:
                break
            group.append(heapq.heappop(h))
        self._process_group(group, tn)
        return True

    def _process_group(self, group: list[_Entry], tn: Time) -> None:
        assert compare(tn, self.t_now) == GT, "event times must increase"
        kept = []
        for e in group:
            if e.kind == "RADIUS" and self._is_spurious(e):
                cert = self._radius_certs[e.anchor]
                self._advance_radius(cert)
                self.counters.spurious_roots_skipped += 1
            else:
                kept.append(e)
        if not kept:
            self.t_now = tn
            return
        group = kept
        if len(group) > 1:
            cert_entries = [e for e in group if e.kind not in _STRUCTURAL]
            if cert_entries:
                group = self._dedupe_flips(group, tn)
        if len(group) > 1 and any(e.kind not in _STRUCTURAL for e in group):
            raise SimultaneousEvents(self._simultaneity_message(group, tn))
        self.t_now = tn
        if group[0].kind == "FLIP":
            records = self._handle_flip(group[0], tn)
        elif group[0].kind == "RADIUS":
            records = self._handle_radius(group[0], tn)
        else:
            group.sort(key=lambda e: (_RANK[e.kind], e.anchor))
            records = self._handle_structural_group(group, tn)
        self.event_log.extend(records)
        for hook in self.hooks:
            hook(self, records)

    def _dedupe_flips(self, group: list[_Entry], tn: Time) -> list[_Entry]:
        """Several flip certificates can describe the same event: around
        a hull vertex the facets incident to the infinite vertex share
        the five-set and therefore the root.  Entries whose planned
        (removed, created) cell sets agree collapse into one."""
        flips = [e for e in group if e.kind == "FLIP"]
        others = [e for e in group if e.kind != "FLIP"]
        if len(flips) < 2:
            return group
        plans = {}
        for e in flips:
            plan = self._plan_flip(e.anchor)
            plans.setdefault((plan[0], plan[1]), []).append(e)
        if len(plans) == 1:
            return others + [flips[0]]
        return group

    def _simultaneity_message(self, group: list[_Entry], tn: Time) -> str:
        parts = [f"{e.kind}{e.anchor}" for e in group]
        if isinstance(tn, AlgebraicReal) and tn.exact is None:
            when = f"t in ({tn.lo}, {tn.hi})"
        else:
            when = f"t = {tn.exact if isinstance(tn, AlgebraicReal) else tn}"
        return (
            "events coincide at "
            + when
            + ": "
            + ", ".join(parts)
            + "; the distinct-events assumption is violated"
        )

    # ------------------------------------------------------------------
    # spurious roots of the degree-10 triangle certificate

    def _is_spurious(self, e: _Entry) -> bool:
        """True for roots the degree-10 triangle certificate picks up at
        collinearity times: the square of the normal divides it, so the
        sign does not change and the circumradius never crossed alpha0."""
        cert = self._radius_certs[e.anchor]
        s = cert.simplex
        if len(s) != 3 or self.config.degree6_triangle:
            return False
        root = cert.roots[cert.idx]
        s_before, s_after = root_transition(cert.poly, root)
        if s_before != s_after:
            return False
        collin = triangle_collinearity_poly(
            *(self.motions[v] for v in s)
        )
        return sign_at(collin, root) == 0

    # ------------------------------------------------------------------
    # flip events

    def _plan_flip(self, facet: Facet):
        """Combinatorial dispatch: returns (removed_cells, created_cells,
        fiveset, p, q) without touching any state."""
        cells = self._cells_containing(facet)
        assert len(cells) == 2
        c1, c2 = cells
        fs = set(facet)
        p = next(v for v in c1 if v not in fs)
        q = next(v for v in c2 if v not in fs)
        if p > q:
            p, q = q, p
        fiveset = tuple(sorted(fs | {p, q}))
        thirds = []
        for e in combinations(facet, 2):
            third = cell_of(e + (p, q))
            if third in self.tri.cells:
                thirds.append((e, third))
        if len(thirds) > 1:
            raise UnflippableEvent(
                f"facet {facet} has several third cells at its event; "
                "degenerate configuration"
            )
        if thirds:
            (e, third) = thirds[0]
            w = next(v for v in facet if v not in e)
            removed = (c1, c2, third)
            created = (cell_of((w, p, q, e[0])), cell_of((w, p, q, e[1])))
        else:
            removed = (c1, c2)
            created = tuple(
                cell_of(e + (p, q)) for e in combinations(facet, 2)
            )
        return (
            tuple(sorted(removed)),
            tuple(sorted(created)),
            fiveset,
            p,
            q,
        )

    def _validate_flip(self, facet, fiveset, p, q, removed, created, T) -> None:
        if INF in fiveset:
            # the one flat-at-T finite cell is expected; reject only
            # collinear hull facets, which make the update ambiguous
            for cell in created:
                if INF in cell:
                    tri = [v for v in cell if v != INF]
                    coll = triangle_collinearity_poly(
                        *(self.motions[v] for v in tri)
                    )
                    if sign_at(coll, T) == 0:
                        raise DegenerateInput(
                            f"hull facet {tuple(tri)} degenerates to "
                            f"collinear points at the flip"
                        )
            return

        def osign(vs) -> int:
            poly = flip_certificate_4(tuple(self.motions[v] for v in vs))
            return sign_at(poly, T)

        s_p = osign(facet + (p,))
        s_q = osign(facet + (q,))
        if s_p == 0 or s_q == 0:
            raise DegenerateInput(
                f"four of the five flip vertices {fiveset} are coplanar "
                f"at the event"
            )
        if s_p * s_q > 0:
            raise UnflippableEvent(
                f"apexes of facet {facet} sit on the same side at the "
                f"co-sphericity time"
            )
        if len(removed) == 2:
            a, b, c = facet
            ss = [
                osign((a, b, p, q)),
                osign((b, c, p, q)),
                osign((c, a, p, q)),
            ]
            if any(s == 0 for s in ss):
                raise DegenerateInput(
                    f"four of the five flip vertices {fiveset} are "
                    f"coplanar at the event"
                )
            if not (ss[0] == ss[1] == ss[2]):
                raise UnflippableEvent(
                    f"segment between the apexes of facet {facet} misses "
                    f"the facet and no third cell exists; coinciding "
                    f"events or degenerate input"
                )
        else:
            for cell in created:
                if osign(cell) == 0:
                    raise DegenerateInput(
                        f"cell {cell} created by the flip is flat at the "
                        f"event time"
                    )

    def _handle_flip(self, entry: _Entry, T: Time) -> list[EventRecord]:
        facet = entry.anchor
        cert = self._flip_certs[facet]
        s_before, s_after = root_transition(cert.poly, cert.root)
        if s_before == s_after:
            raise UnflippableEvent(
                f"flip certificate of facet {facet} touches zero without "
                f"crossing; two co-sphericity events coincide"
            )
        removed, created, fiveset, p, q = self._plan_flip(facet)
        assert fiveset == cert.fiveset
        self._validate_flip(facet, fiveset, p, q, removed, created, T)

        removed_faces = set()
        for cell in removed:
            removed_faces.update(self._finite_faces(cell))
        created_faces = set()
        for cell in created:
            created_faces.update(self._finite_faces(cell))
        existed_before = {
            s: self._simplex_in_complex(s) for s in created_faces
        }

        self.tri.cells -= set(removed)
        self.tri.cells |= set(created)
        self._sync_cells(removed, created)

        removed_simplices = sorted(
            (s for s in removed_faces if not self._simplex_in_complex(s)),
            key=_skey,
        )
        created_simplices = sorted(
            (s for s in created_faces if not existed_before[s]), key=_skey
        )

        finite = tuple(v for v in fiveset if v != INF)
        if INF in fiveset:
            rep = finite
        else:
            rep = created[0]
        rep_poly = radius_certificate_tet(
            *(self.motions[v] for v in rep), self.alpha_sq
        )
        s_rep = sign_at(rep_poly, T)
        if s_rep == 0:
            if INF in fiveset:
                raise DegenerateInput(
                    f"hull vertices {finite} are cocircular at the flip"
                )
            raise SimultaneousEvents(
                f"flip of {fiveset} coincides with a radius event of "
                f"cell {rep}"
            )

        if s_rep < 0:
            # the shared circumsphere is smaller than alpha0: everything
            # removed leaves the alpha complex, everything created joins
            # it, and the five-vertex join fills the instant
            for s in removed_simplices:
                assert self.in_alpha[s], (
                    "removed simplex outside the alpha complex at a "
                    "short flip"
                )
                self._m_close(s, T)
                del self.short[s], self.in_alpha[s]
            for s in created_simplices:
                self.short[s] = True
                self.in_alpha[s] = True
                self._m_open(s, T, RADIUS)
            self._m_fill(fiveset, T, FLIP_FILL)
        else:
            for s in removed_simplices:
                assert not self.in_alpha[s], (
                    "removed simplex inside the alpha complex at a "
                    "non-short flip"
                )
                del self.short[s], self.in_alpha[s]
            for s in created_simplices:
                if len(s) == 4:
                    self.short[s] = False
                else:
                    probe = radius_certificate(
                        tuple(self.motions[v] for v in s), self.alpha_sq
                    )
                    sp = sign_at(probe, T)
                    if sp == 0:
                        raise SimultaneousEvents(
                            f"flip of {fiveset} coincides with a radius "
                            f"event of {s}"
                        )
                    self.short[s] = sp < 0
                self.in_alpha[s] = False

        affected = set()
        for cell in removed + created:
            affected.update(facets_of(cell))
        for f in sorted(affected):
            self._flip_certs.pop(f, None)
            if len(self._cells_containing(f)) == 2:
                self._install_flip(f, T, at_event=True)
        for s in sorted(removed_faces | created_faces, key=_skey):
            self._reconcile_radius(s, T, at_event=True)

        self.counters.flips += 1
        return [EventRecord("FLIP", T, fiveset)]

    def _finite_faces(self, cell: Cell) -> list[Simplex]:
        finite = tuple(v for v in cell if v != INF)
        out: list[Simplex] = []
        for k in range(2, len(finite) + 1):
            out.extend(combinations(finite, k))
        return out

    # ------------------------------------------------------------------
    # radius events

    def _gabriel_at(self, s: Simplex, t: Time) -> bool:
        """Exact emptiness of the diametral ball of s at time t; a point
        exactly on the sphere is a coinciding-events violation."""
        builder = gabriel_poly_edge if len(s) == 2 else gabriel_poly_triangle
        own = tuple(self.motions[v] for v in s)
        for w in sorted(self.motions):
            if w in s:
                continue
            g = builder(*own, self.motions[w])
            sg = sign_at(g, t)
            if sg == 0:
                raise SimultaneousEvents(
                    f"vertex {w} lies exactly on the smallest circumball "
                    f"of {s} at its radius event"
                )
            if sg < 0:
                return False
        return True

    def _handle_radius(self, entry: _Entry, T: Time) -> list[EventRecord]:
        s = entry.anchor
        cert = self._radius_certs[s]
        root = cert.roots[cert.idx]
        s_before, s_after = root_transition(cert.poly, root)
        if s_before == s_after:
            raise DegenerateInput(
                f"circumradius of {s} touches alpha0 without crossing"
            )
        self._advance_radius(cert)

        if s_before > 0:
            # non-short -> short; the simplex enters the alpha complex
            # right away only if its smallest circumball is empty,
            # otherwise a coface's event will pick it up later
            self.short[s] = True
            if len(s) == 4 or self._gabriel_at(s, T):
                for tau in [s] + sorted(_proper_faces(s), key=_skey):
                    if not self.in_alpha[tau]:
                        self.in_alpha[tau] = True
                        self._m_open(tau, T, RADIUS)
        else:
            self.short[s] = False
            if self.in_alpha[s]:
                self.in_alpha[s] = False
                self._m_close(s, T)
                # faces survive through another in-alpha coface or their
                # own empty circumball; check top-down so triangle
                # removals are visible to their edges
                for tau in sorted(
                    _proper_faces(s), key=_skey, reverse=True
                ):
                    if not self.in_alpha[tau]:
                        continue
                    if any(
                        self.in_alpha[c] for c in self._cofaces(tau)
                    ):
                        continue
                    if self._gabriel_at(tau, T):
                        continue
                    self.in_alpha[tau] = False
                    self._m_close(tau, T)

        zone = [s] + sorted(_proper_faces(s), key=_skey) + sorted(
            self._cofaces(s), key=_skey
        )
        for tau in zone:
            self._reconcile_radius(tau, T, at_event=True)

        self.counters.radius_events += 1
        return [EventRecord("RADIUS", T, s)]

    # ------------------------------------------------------------------
    # structural events (bends, insertions, deletions)

    def _handle_structural_group(
        self, entries: list[_Entry], t: Fraction
    ) -> list[EventRecord]:
        self._med_ops = {}
        records: list[EventRecord] = []
        bent: set[int] = set()
        zone_facets: set[Facet] = set()
        zone_simplices: set[Simplex] = set()
        try:
            for e in entries:
                vid = e.anchor[0]
                if e.kind == "DELETE":
                    records.append(
                        self._apply_delete(vid, t, zone_facets, zone_simplices)
                    )
                elif e.kind == "BEND":
                    records.append(self._apply_bend(vid, t))
                    bent.add(vid)
                else:
                    records.append(
                        self._apply_insert(vid, t, zone_facets, zone_simplices)
                    )
            self._flush_medusa(t)
        finally:
            self._med_ops = None

        self.epoch_lo = t
        if self._cache is not None:
            self._cache.set_epoch(self._epoch_end())
        if bent:
            for facet, cert in self._flip_certs.items():
                if bent.intersection(cert.fiveset):
                    zone_facets.add(facet)
            for s in self._radius_certs:
                if bent.intersection(s):
                    zone_simplices.add(s)
        for f in sorted(zone_facets):
            self._flip_certs.pop(f, None)
            if len(self._cells_containing(f)) == 2:
                self._install_flip(f, t)
        for s in sorted(zone_simplices, key=_skey):
            self._reconcile_radius(s, t, force=bool(bent.intersection(s)))
        return records

    def _apply_bend(self, vid: int, t: Fraction) -> EventRecord:
        m = self.trajectories[vid].segment(t)
        self.motions[vid] = m
        self.segment_end[vid] = m.t1
        self.counters.bending_events += 1
        return EventRecord("BEND", t, (vid,))

    def _apply_insert(
        self,
        vid: int,
        t: Fraction,
        zone_facets: set[Facet],
        zone_simplices: set[Simplex],
    ) -> EventRecord:
        m = self.trajectories[vid].segment(t)
        self.motions[vid] = m
        self.segment_end[vid] = m.t1
        points = self._positions(t)
        removed_cells, created_cells = self.tri.insert(points, vid)
        self._sync_cells(removed_cells, created_cells)

        old_alpha = self.in_alpha
        flags = classify(points, self.tri.cells, self.alpha_sq)
        # the non-local part: a surviving simplex can gain or lose its
        # empty circumball when the new point lands inside it, anywhere
        # in the complex, so membership is rebuilt from scratch
        for s in sorted(old_alpha, key=_skey):
            if not old_alpha[s]:
                continue
            if not flags.in_alpha.get(s, False):
                self._m_close(s, t)
            if s not in flags.in_alpha:
                self._m_fill(tuple(sorted(s + (vid,))), t, INSERT_FILL)
        for s in sorted(flags.in_alpha, key=_skey):
            if flags.in_alpha[s] and not old_alpha.get(s, False):
                self._m_open(s, t, RADIUS)
        self._m_open((vid,), t, RADIUS)
        self.short = dict(flags.short)
        self.in_alpha = dict(flags.in_alpha)

        for cell in removed_cells + created_cells:
            zone_facets.update(facets_of(cell))
            zone_simplices.update(self._finite_faces(cell))
        self.counters.insertions += 1
        return EventRecord("INSERT", t, (vid,))

    def _apply_delete(
        self,
        vid: int,
        t: Fraction,
        zone_facets: set[Facet],
        zone_simplices: set[Simplex],
    ) -> EventRecord:
        points = self._positions(t)
        removed_cells, created_cells = self.tri.remove(points, vid)
        self._sync_cells(removed_cells, created_cells)
        del self.motions[vid], self.segment_end[vid]
        del points[vid]

        old_alpha = self.in_alpha
        flags = classify(points, self.tri.cells, self.alpha_sq)
        for s in sorted(old_alpha, key=_skey):
            if old_alpha[s] and not flags.in_alpha.get(s, False):
                self._m_close(s, t)
        for s in sorted(flags.in_alpha, key=_skey):
            if not flags.in_alpha[s]:
                continue
            if not old_alpha.get(s, False):
                self._m_open(s, t, RADIUS)
            if s not in old_alpha:
                self._m_fill(tuple(sorted(s + (vid,))), t, DELETE_FILL)
        self._m_close((vid,), t)
        self.short = dict(flags.short)
        self.in_alpha = dict(flags.in_alpha)

        for cell in removed_cells + created_cells:
            zone_facets.update(facets_of(cell))
            zone_simplices.update(self._finite_faces(cell))
        self.counters.deletions += 1
        return EventRecord("DELETE", t, (vid,))

    # ------------------------------------------------------------------
    # buffered medusa operations

    def _m_open(self, verts: tuple, t: Time, cause: str) -> None:
        if self._med_ops is None:
            self.medusa.open(verts, t, cause)
        else:
            self._med_ops.setdefault(verts, []).append(("open", cause))

    def _m_close(self, verts: tuple, t: Time) -> None:
        if self._med_ops is None:
            self.medusa.close(verts, t)
        else:
            self._med_ops.setdefault(verts, []).append(("close", None))

    def _m_fill(self, verts: tuple, t: Time, origin: str) -> None:
        if self._med_ops is None:
            self.medusa.fill(verts, t, origin)
        else:
            self._med_ops.setdefault(verts, []).append(("fill", origin))

    def _flush_medusa(self, t: Fraction) -> None:
        """Resolve buffered operations of one structural instant.  A
        close followed by an open of the same cell cancels (the copy
        lives through t uninterrupted); an open followed by a close
        leaves a degenerate [t, t] copy; a fill is dropped whenever the
        same vertex set also has a regular copy covering t, which keeps
        lifetimes of copies disjoint."""
        assert self._med_ops is not None
        for verts in sorted(self._med_ops, key=_skey):
            seq = self._med_ops[verts]
            fills = [op for op in seq if op[0] == "fill"]
            regular = [op for op in seq if op[0] != "fill"]
            residue: list = []
            for op in regular:
                if residue and residue[-1][0] == "close" and op[0] == "open":
                    residue.pop()
                else:
                    residue.append(op)
            for op in residue:
                if op[0] == "open":
                    self.medusa.open(verts, t, op[1])
                else:
                    self.medusa.close(verts, t)
            if fills:
                assert len(fills) == 1, f"colliding fills for {verts}"
                if not regular:
                    self.medusa.fill(verts, t, fills[0][1])
