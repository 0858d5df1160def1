"""Trajectory files, synthetic inputs, the simulation driver and export.

The text format keeps every number an exact rational so that runs are
replayable bit-for-bit:

    # optional comments
    count 2
    bends 0 1/2 1
    trajectory 0 0 1 0,0,0 1/2,0,0 1,1,0
    trajectory 1 1/2 1 3,4,5 3,4,6

``bends`` is the global breakpoint grid (starts at 0, ends at 1); every
trajectory lists its domain [a, b] (both grid values) followed by one
position per grid value inside the domain.

Medusa cells are exported as tab-separated lines; rational times print
as ``p/q`` and algebraic ones as ``alg:`` records carrying the defining
polynomial, a canonical decimal isolating interval and a rounded decimal
approximation.  The canonical interval depends only on the root and the
polynomial, never on how much interval refinement a particular run
happened to perform, which is what makes replays byte-identical.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .alpha import classify
from .engine import EngineConfig, KineticEngine
from .errors import CoincidentTrajectories, FormatError
from .medusa import MedusaCell
from .motion import Trajectory
from .roots import (
    EQ,
    GT,
    AlgebraicReal,
    compare,
    descartes_bound,
    isolate_roots,
    rational_between,
    sign_at,
)
from .triangulation import Triangulation

F = Fraction


# ----------------------------------------------------------------------
# rationals in text


def parse_rational(token: str, line: Optional[int] = None) -> Fraction:
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"not a rational number: {token!r}", line) from None


def fmt_q(x) -> str:
    return str(Fraction(x))


# ----------------------------------------------------------------------
# trajectory files


@dataclass
class TrajectoryFile:
    grid: tuple[Fraction, ...]
    trajectories: list[Trajectory] = field(default_factory=list)

    def text(self) -> str:
        lines = [
            "# piecewise-linear trajectories on a shared breakpoint grid",
            f"count {len(self.trajectories)}",
            "bends " + " ".join(fmt_q(g) for g in self.grid),
        ]
        for tr in sorted(self.trajectories, key=lambda tr: tr.tid):
            pts = " ".join(
                ",".join(fmt_q(c) for c in p) for p in tr.points
            )
            lines.append(
                f"trajectory {tr.tid} {fmt_q(tr.domain_start)} "
                f"{fmt_q(tr.domain_end)} {pts}"
            )
        return "\n".join(lines) + "\n"


def parse_trajectory_file(text: str) -> TrajectoryFile:
    rows: list[tuple[int, list[str]]] = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            rows.append((ln, body.split()))

    if not rows:
        raise FormatError("empty trajectory file")
    ln, head = rows[0]
    if head[0] != "count" or len(head) != 2:
        raise FormatError("expected 'count <n>'", ln)
    try:
        count = int(head[1])
    except ValueError:
        raise FormatError(f"bad count {head[1]!r}", ln) from None
    if count < 0:
        raise FormatError("count must be non-negative", ln)

    if len(rows) < 2:
        raise FormatError("missing 'bends' line", ln)
    ln, bend_row = rows[1]
    if bend_row[0] != "bends" or len(bend_row) < 3:
        raise FormatError("expected 'bends <t0> <t1> ...'", ln)
    grid = tuple(parse_rational(tok, ln) for tok in bend_row[1:])
    if grid[0] != 0 or grid[-1] != 1:
        raise FormatError("bend grid must start at 0 and end at 1", ln)
    if any(a >= b for a, b in zip(grid, grid[1:])):
        raise FormatError("bend grid must strictly increase", ln)

    trajectories: list[Trajectory] = []
    seen: set[int] = set()
    for ln, row in rows[2:]:
        if row[0] != "trajectory":
            raise FormatError(f"unexpected directive {row[0]!r}", ln)
        if len(row) < 4:
            raise FormatError("expected 'trajectory <id> <a> <b> <p>...'", ln)
        try:
            tid = int(row[1])
        except ValueError:
            raise FormatError(f"bad trajectory id {row[1]!r}", ln) from None
        if tid < 0:
            raise FormatError("trajectory ids must be non-negative", ln)
        if tid in seen:
            raise FormatError(f"duplicate trajectory id {tid}", ln)
        seen.add(tid)
        a = parse_rational(row[2], ln)
        b = parse_rational(row[3], ln)
        if not (0 <= a < b <= 1):
            raise FormatError(f"domain [{a}, {b}] invalid", ln)
        if a not in grid or b not in grid:
            raise FormatError(
                f"domain endpoints {a}, {b} must lie on the bend grid", ln
            )
        times = [g for g in grid if a <= g <= b]
        pts = []
        for tok in row[4:]:
            coords = tok.split(",")
            if len(coords) != 3:
                raise FormatError(f"position {tok!r} is not x,y,z", ln)
            pts.append(tuple(parse_rational(c, ln) for c in coords))
        if len(pts) != len(times):
            raise FormatError(
                f"trajectory {tid} spans {len(times)} grid values "
                f"but lists {len(pts)} positions",
                ln,
            )
        trajectories.append(Trajectory(tid, times, pts))

    if len(trajectories) != count:
        raise FormatError(
            f"count says {count} trajectories, file has {len(trajectories)}"
        )
    tf = TrajectoryFile(grid, trajectories)
    check_no_coincidence(tf)
    return tf


def load_trajectory_file(path) -> TrajectoryFile:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_trajectory_file(fh.read())


def save_trajectory_file(tf: TrajectoryFile, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(tf.text())


# ----------------------------------------------------------------------
# pairwise coincidence certificate


def _segment_coincidence(p: Trajectory, q: Trajectory, lo: Fraction, hi: Fraction):
    """Earliest t in [lo, hi] with p(t) == q(t), or None.  Both
    trajectories are linear on [lo, hi]."""
    d0 = tuple(x - y for x, y in zip(p.position(lo), q.position(lo)))
    d1 = tuple(x - y for x, y in zip(p.position(hi), q.position(hi)))
    if lo == hi:
        return lo if all(c == 0 for c in d0) else None
    candidates = []
    whole = True
    for c0, c1 in zip(d0, d1):
        if c0 == 0 and c1 == 0:
            continue
        whole = False
        if c0 == c1:
            return None  # constant nonzero difference in this coordinate
        lam = c0 / (c0 - c1)
        if not (0 <= lam <= 1):
            return None
        candidates.append(lo + (hi - lo) * lam)
    if whole:
        return lo
    t = candidates[0]
    if all(c == t for c in candidates[1:]):
        return t
    return None


def check_no_coincidence(tf: TrajectoryFile) -> None:
    trajs = sorted(tf.trajectories, key=lambda tr: tr.tid)
    for i, p in enumerate(trajs):
        for q in trajs[i + 1 :]:
            lo = max(p.domain_start, q.domain_start)
            hi = min(p.domain_end, q.domain_end)
            if lo > hi:
                continue
            cuts = [g for g in tf.grid if lo <= g <= hi]
            for a, b in zip(cuts, cuts[1:]):
                t = _segment_coincidence(p, q, a, b)
                if t is not None:
                    raise CoincidentTrajectories(
                        f"trajectories {p.tid} and {q.tid} coincide "
                        f"at t={t}"
                    )
            if len(cuts) == 1:
                t = _segment_coincidence(p, q, cuts[0], cuts[0])
                if t is not None:
                    raise CoincidentTrajectories(
                        f"trajectories {p.tid} and {q.tid} coincide "
                        f"at t={t}"
                    )


# ----------------------------------------------------------------------
# synthetic generator


def generate(
    seed: int,
    n_trajectories: int,
    n_bends: int,
    box_size=10,
    two_type_sorting: bool = False,
) -> TrajectoryFile:
    """Deterministic pseudo-random instance: jittered cubical grid start,
    piecewise-linear drift on a uniform bend grid.  With two-type
    sorting, even ids shrink toward the box center and odd ids drift
    outward, a crude engulfment-style relaxation."""
    if n_trajectories < 1:
        raise ValueError("need at least one trajectory")
    if n_bends < 1:
        raise ValueError("need at least one segment")
    box = Fraction(box_size)
    if box <= 0:
        raise ValueError("box size must be positive")
    grid = tuple(F(i, n_bends) for i in range(n_bends + 1))

    for attempt in range(10):
        rng = random.Random(seed * 1000003 + attempt)
        tf = TrajectoryFile(grid, _draw(rng, n_trajectories, n_bends, box,
                                        two_type_sorting, grid))
        try:
            check_no_coincidence(tf)
        except CoincidentTrajectories:
            continue
        return tf
    raise CoincidentTrajectories(
        f"could not draw a coincidence-free instance for seed {seed}"
    )


def _draw(rng, n, n_bends, box, sorting, grid) -> list[Trajectory]:
    m = max(1, math.ceil(n ** (1 / 3)))
    cell = box / m
    center = (box / 2, box / 2, box / 2)

    def jitter(den=32, span=8):
        return cell * F(rng.randrange(-span, span + 1), den)

    def clamp(x):
        return min(max(x, F(0)), box)

    trajectories = []
    for vid in range(n):
        ix, r = divmod(vid, m * m)
        iy, iz = divmod(r, m)
        start = tuple(
            clamp(cell * i + cell / 2 + jitter()) for i in (ix, iy, iz)
        )
        pts = [start]
        pos = start
        for k in range(1, n_bends + 1):
            if sorting:
                # even ids contract toward the center, odd ids escape
                factor = (
                    1 - F(k, 3 * n_bends)
                    if vid % 2 == 0
                    else 1 + F(k, 2 * n_bends)
                )
                pos = tuple(
                    clamp(c + (s - c) * factor + jitter(den=64, span=4))
                    for s, c in zip(start, center)
                )
            else:
                pos = tuple(clamp(x + jitter()) for x in pos)
            pts.append(pos)
        trajectories.append(Trajectory(vid, grid, pts))
    return trajectories


# ----------------------------------------------------------------------
# canonical time serialization


def _fresh_isolation(t: AlgebraicReal) -> AlgebraicReal:
    """Re-isolate the root from its defining polynomial alone so the
    exported representation is independent of refinement history."""
    for r in isolate_roots(t.poly, F(0), F(1)):
        if compare(r, t) == EQ:
            return r
    return t  # pragma: no cover - event times always lie in (0, 1)


def _round_half_up(x: Fraction) -> int:
    return math.floor(x + F(1, 2))


def _decimal_string(d: int, places: int) -> str:
    whole, frac = divmod(d, 10 ** places)
    return f"{whole}.{str(frac).rjust(places, '0')}"


def format_time(t, digits: int = 12) -> str:
    """Exact rational as p/q; algebraic time as an ``alg:`` record with
    the defining polynomial (constant coefficient first), a canonical
    decimal isolating interval and ``digits`` significant digits."""
    if not isinstance(t, AlgebraicReal):
        return fmt_q(t)
    if t.exact is not None:
        return fmt_q(t.exact)
    root = _fresh_isolation(t)
    if root.exact is not None:
        return fmt_q(root.exact)

    # exponent search: event times lie strictly inside (0, 1)
    m = 1
    while True:
        c = compare(root, F(1, 10 ** m))
        if c == GT:
            break
        if c == EQ:
            return fmt_q(F(1, 10 ** m))
        m += 1
    places = digits + m - 1
    scale = 10 ** places

    while True:
        lo_r = _round_half_up(root.lo * scale)
        hi_r = _round_half_up(root.hi * scale)
        if lo_r == hi_r:
            d = lo_r
            break
        if hi_r - lo_r == 1:
            boundary = F(2 * lo_r + 1, 2 * scale)
            if sign_at(root.poly, boundary) == 0:
                return fmt_q(boundary)
        root.refine_step()
    approx = _decimal_string(d, places)

    j = places + 1
    while True:
        cell = 10 ** j
        while True:
            lo_f = math.floor(root.lo * cell)
            hi_f = math.floor(root.hi * cell)
            if lo_f == hi_f:
                break
            boundary = F(lo_f + 1, cell)
            if sign_at(root.poly, boundary) == 0:
                return fmt_q(boundary)
            root.refine_step()
        lo_c, hi_c = F(lo_f, cell), F(lo_f + 1, cell)
        if descartes_bound(root.poly, lo_c, hi_c) == 1:
            coeffs = ",".join(str(c) for c in root.icoeffs)
            return (
                f"alg:poly={coeffs};lo={fmt_q(lo_c)};hi={fmt_q(hi_c)};"
                f"approx={approx}"
            )
        j += 1


# ----------------------------------------------------------------------
# medusa and stats export


MEDUSA_HEADER = "# dim\tvertices\torigin\tbirth\tdeath"


def format_medusa(cells: Sequence[MedusaCell], digits: int = 12) -> str:
    lines = [MEDUSA_HEADER]
    for c in cells:
        lines.append(
            "\t".join(
                (
                    str(c.dim),
                    ",".join(str(v) for v in c.vertex_ids),
                    c.origin,
                    format_time(c.birth, digits),
                    format_time(c.death, digits),
                )
            )
        )
    return "\n".join(lines) + "\n"


def stats_dict(engine: KineticEngine, probes: int = 0) -> dict:
    counters = engine.stats().as_dict()
    dismissed = counters["certificates_filtered"]
    # certificates_no_root counts every rootless isolation, the
    # fast-path dismissals included
    rootless = counters["certificates_no_root"]
    cfg = engine.config
    return {
        "alpha_sq": fmt_q(engine.alpha_sq),
        "counters": counters,
        "filter_fraction": (
            fmt_q(F(dismissed, rootless)) if rootless else None
        ),
        "probes": probes,
        "toggles": {
            "prune_certificates": cfg.prune_certificates,
            "degree6_triangle": cfg.degree6_triangle,
            "descartes_filter": cfg.descartes_filter,
            "root_cache": cfg.root_cache,
        },
        "trajectories": len(engine.trajectories),
    }


def format_stats(engine: KineticEngine, probes: int = 0) -> str:
    return json.dumps(stats_dict(engine, probes), sort_keys=True, indent=2) + "\n"


# ----------------------------------------------------------------------
# driver


class ProbeMismatch(Exception):
    """A probe found the kinetic state out of sync with recomputation."""


@dataclass
class RunResult:
    engine: KineticEngine
    medusa: list[MedusaCell]
    medusa_text: str
    stats_text: str
    probe_times: list[Fraction]


def _verify_probe(engine: KineticEngine, t: Fraction) -> None:
    positions = engine.positions_at(t)
    fresh = Triangulation.build(positions)
    if fresh.cells != engine.tri.cells:
        raise ProbeMismatch(
            f"triangulation mismatch at t={t}: "
            f"{sorted(fresh.cells ^ engine.tri.cells)}"
        )
    flags = classify(positions, fresh.cells, engine.alpha_sq)
    kinetic = {s for s, v in engine.in_alpha.items() if v}
    if kinetic != flags.members():
        raise ProbeMismatch(
            f"alpha complex mismatch at t={t}: "
            f"{sorted(kinetic ^ flags.members(), key=lambda s: (len(s), s))}"
        )
    stacks = {(v,) for v in positions}
    active = engine.medusa.active_members(max_dim=3)
    if active != kinetic | stacks:
        raise ProbeMismatch(
            f"medusa active list mismatch at t={t}: "
            f"{sorted(active ^ (kinetic | stacks))}"
        )


def probe_schedule(count: int, seed: int) -> list[Fraction]:
    rng = random.Random(seed)
    times = {F(rng.randrange(1, 999983), 999983) for _ in range(count)}
    return sorted(times)


def run_simulation(
    trajectories: Iterable[Trajectory],
    alpha_sq,
    config: Optional[EngineConfig] = None,
    probes: int = 0,
    probe_seed: int = 0,
    digits: int = 12,
) -> RunResult:
    engine = KineticEngine(trajectories, alpha_sq, config)
    schedule = probe_schedule(probes, probe_seed) if probes else []
    used: list[Fraction] = []
    if engine.trajectories:
        for t in schedule:
            engine.run_to(t)
            nxt = engine.next_event_time()
            if nxt is not None and compare(nxt, t) == EQ:
                # probe drawn exactly on an event: observe just after it
                engine.step()
                hi = engine.next_event_time()
                t = rational_between(t, hi if hi is not None else F(1))
            _verify_probe(engine, t)
            used.append(t)
        engine.run_to(None)
    medusa = engine.finalize()
    return RunResult(
        engine,
        medusa,
        format_medusa(medusa, digits),
        format_stats(engine, probes=len(used)),
        used,
    )
