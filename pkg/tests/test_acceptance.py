"""Acceptance gate: one printed pass/fail line per criterion.

The seeded suite (22 generated instances spanning 8-20 trajectories and
2-8 bends) is run once and shared by the criteria that read it.  Run
with ``pytest tests/test_acceptance.py -q`` and read the bracketed
lines.
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction as F
from functools import cmp_to_key

import pytest

from alphamedusa.certificates import (
    flip_certificate_4,
    flip_certificate_5,
    radius_certificate_edge,
    radius_certificate_tet,
    radius_certificate_triangle,
    radius_certificate_triangle_deg10,
    triangle_collinearity_poly,
)
from alphamedusa.dataset import (
    _verify_probe,
    format_medusa,
    generate,
    probe_schedule,
    run_simulation,
)
from alphamedusa.engine import EngineConfig, KineticEngine
from alphamedusa.errors import DegeneracyError
from alphamedusa.medusa import check_disjoint_lifetimes
from alphamedusa.motion import LinearMotion
from alphamedusa.roots import EQ, compare, isolate_roots, rational_between, sign_at

# (seed, trajectories, bends, alpha_sq, two_type_sorting) - seeds chosen
# so every instance runs degeneracy-free
SUITE = [
    (100, 8, 2, "4", False),
    (117, 8, 3, "9/2", False),
    (134, 9, 2, "5", False),
    (151, 9, 4, "4", True),
    (168, 10, 2, "25/4", False),
    (185, 10, 3, "4", False),
    (202, 10, 5, "9/2", True),
    (219, 11, 2, "5", False),
    (236, 11, 4, "4", False),
    (253, 12, 3, "25/4", False),
    (270, 12, 6, "4", True),
    (287, 13, 2, "9/2", False),
    (304, 13, 4, "5", False),
    (321, 14, 3, "4", False),
    (338, 14, 7, "25/4", True),
    (355, 15, 2, "4", False),
    (372, 16, 4, "9/2", False),
    (389, 16, 8, "5", False),
    (406, 17, 3, "4", True),
    (423, 18, 5, "25/4", False),
    (440, 19, 2, "4", False),
    (458, 20, 8, "5", False),
]

PROBES_PER_RUN = 50
ALLOWED_KINDS = {"FLIP", "RADIUS", "BEND", "INSERT", "DELETE"}


def emit(capsys, ok: bool, label: str, detail: str) -> None:
    with capsys.disabled():
        print(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}", flush=True)
    assert ok, f"{label}: {detail}"


@dataclass
class Evidence:
    combo: tuple
    probes: int = 0
    probe_failures: list = field(default_factory=list)
    invariant_failures: list = field(default_factory=list)
    kinds: set = field(default_factory=set)
    flip_fills: int = 0
    fill_violations: list = field(default_factory=list)
    counters: dict = field(default_factory=dict)
    medusa_text: str = ""
    events: int = 0
    error: str = ""


def _run_combo(seed, n, bends, alpha_sq, sorting, probes=PROBES_PER_RUN) -> Evidence:
    ev = Evidence((seed, n, bends, alpha_sq, sorting))
    tf = generate(seed, n, bends, two_type_sorting=sorting)
    eng = KineticEngine(tf.trajectories, F(alpha_sq))

    def hook(e, records):
        t = records[0].time
        for r in records:
            ev.kinds.add(r.kind)
        try:
            e.medusa.check_state(t)
            kinetic = {s for s, v in e.in_alpha.items() if v}
            stacks = {(v,) for v in e.motions}
            if e.medusa.active_members(max_dim=3) != kinetic | stacks:
                ev.invariant_failures.append(f"active set drift at {t!r}")
        except Exception as exc:  # keep the run going, report at the end
            ev.invariant_failures.append(f"{t!r}: {exc}")

    eng.hooks.append(hook)
    try:
        for t in probe_schedule(probes, seed):
            eng.run_to(t)
            nxt = eng.next_event_time()
            if nxt is not None and compare(nxt, t) == EQ:
                eng.step()
                hi = eng.next_event_time()
                t = rational_between(t, hi if hi is not None else F(1))
            try:
                _verify_probe(eng, t)
            except Exception as exc:
                ev.probe_failures.append(f"t={t}: {exc}")
            ev.probes += 1
        eng.run_to(None)
        cells = eng.finalize()
    except DegeneracyError as exc:
        ev.error = str(exc)
        return ev

    try:
        check_disjoint_lifetimes(cells)
    except Exception as exc:
        ev.invariant_failures.append(f"lifetimes: {exc}")
    for c in cells:
        if c.origin == "FLIP_FILL":
            ev.flip_fills += 1
            if len(c.vertex_ids) != 5 or compare(c.birth, c.death) != EQ:
                ev.fill_violations.append(str(c))
    ev.medusa_text = format_medusa(cells)
    ev.counters = eng.stats().as_dict()
    ev.events = sum(
        ev.counters[k]
        for k in ("flips", "radius_events", "bending_events", "insertions", "deletions")
    )
    return ev


@pytest.fixture(scope="module")
def suite_runs():
    return [_run_combo(*combo) for combo in SUITE]


# ----------------------------------------------------------------------
# criterion 1: kinetic state equals exact recomputation at random probes


def test_criterion_1_oracle_equivalence(suite_runs, capsys):
    failures = [f for ev in suite_runs for f in ev.probe_failures]
    failures += [f"{ev.combo}: {ev.error}" for ev in suite_runs if ev.error]
    runs = len(suite_runs)
    probes = sum(ev.probes for ev in suite_runs)
    events = sum(ev.events for ev in suite_runs)
    ok = runs >= 20 and probes == runs * PROBES_PER_RUN and not failures
    emit(
        capsys,
        ok,
        "1 oracle equivalence",
        f"{runs} runs, {events} events, {probes} probes, "
        f"{len(failures)} mismatches" + (f"; first: {failures[0]}" if failures else ""),
    )


# ----------------------------------------------------------------------
# criterion 2: certificate degree bounds on random linear motions


def _random_motion(rng) -> LinearMotion:
    def coord():
        return F(rng.randrange(-60, 61), rng.choice((1, 2, 3, 4, 5, 8)))

    return LinearMotion(
        (coord(), coord(), coord()), (coord(), coord(), coord()), F(0), F(1)
    )


def test_criterion_2_certificate_degrees(capsys):
    rng = random.Random(20260815)
    bounds = {
        "flip5": 5,
        "flip4": 3,
        "edge": 2,
        "triangle6": 6,
        "triangle10": 10,
        "tet": 8,
    }
    seen = {k: 0 for k in bounds}
    bad = []
    for i in range(1000):
        ms = [_random_motion(rng) for _ in range(5)]
        alpha_sq = F(rng.randrange(1, 100), rng.choice((1, 2, 4)))
        degs = {
            "flip5": flip_certificate_5(ms).degree,
            "flip4": flip_certificate_4(ms[:4]).degree,
            "edge": radius_certificate_edge(ms[0], ms[1], alpha_sq).degree,
            "triangle6": radius_certificate_triangle(*ms[:3], alpha_sq).degree,
            "triangle10": radius_certificate_triangle_deg10(*ms[:3], alpha_sq).degree,
            "tet": radius_certificate_tet(*ms[:4], alpha_sq).degree,
        }
        for k, d in degs.items():
            seen[k] = max(seen[k], d)
            if d > bounds[k]:
                bad.append(f"instance {i}: {k} degree {d} > {bounds[k]}")
    observed = " ".join(f"{k}={seen[k]}/{bounds[k]}" for k in bounds)
    emit(
        capsys,
        not bad,
        "2 certificate degrees",
        f"1000 instances, max observed/bound: {observed}"
        + (f"; first violation: {bad[0]}" if bad else ""),
    )


# ----------------------------------------------------------------------
# criterion 3: degree-6 and degree-10 triangle certificates agree


def test_criterion_3_degree6_soundness(capsys):
    rng = random.Random(31337)
    checked = 0
    draws = 0
    mismatches = []
    while checked < 500 and draws < 600:
        draws += 1
        ms = [_random_motion(rng) for _ in range(3)]
        alpha_sq = F(rng.randrange(1, 80), rng.choice((1, 2, 4)))
        p6 = radius_certificate_triangle(*ms, alpha_sq)
        p10 = radius_certificate_triangle_deg10(*ms, alpha_sq)
        n2 = triangle_collinearity_poly(*ms)
        if p6.is_zero() or p10.is_zero():
            continue  # a duplicated point degenerates the trio; redraw

        def valid_roots(p):
            roots = [
                r
                for r in isolate_roots(p, F(0), F(1))
                if sign_at(n2, r) != 0
            ]
            return sorted(roots, key=cmp_to_key(compare))

        r6, r10 = valid_roots(p6), valid_roots(p10)
        if len(r6) != len(r10) or any(
            compare(a, b) != EQ for a, b in zip(r6, r10)
        ):
            mismatches.append(
                f"draw {draws}: {len(r6)} deg6 roots vs {len(r10)} deg10 roots"
            )
        checked += 1
    emit(
        capsys,
        checked == 500 and not mismatches,
        "3 degree-6 triangle certificate soundness",
        f"{checked} random triangle motions, {len(mismatches)} root-set mismatches",
    )


# ----------------------------------------------------------------------
# criterion 4: optimizations 1, 3, 4 change nothing observable


TOGGLE_COMBOS = [SUITE[0], SUITE[3], SUITE[5]]


def _observable(res):
    return (
        [(e.kind, e.anchor) for e in res.engine.event_log],
        [e.time for e in res.engine.event_log],
        res.medusa_text,
    )


def test_criterion_4_optimization_equivalence(capsys):
    problems = []
    ratios = []
    for seed, n, bends, alpha_sq, sorting in TOGGLE_COMBOS:
        trajs = generate(seed, n, bends, two_type_sorting=sorting).trajectories
        base = run_simulation(trajs, F(alpha_sq))
        b_ev, b_times, b_text = _observable(base)
        for name in ("prune_certificates", "descartes_filter", "root_cache"):
            cfg = EngineConfig(**{name: False})
            res = run_simulation(trajs, F(alpha_sq), cfg)
            ev, times, text = _observable(res)
            if ev != b_ev or any(
                compare(a, b) != EQ for a, b in zip(times, b_times)
            ):
                problems.append(f"seed {seed}: {name} changed the event sequence")
            if text != b_text:
                problems.append(f"seed {seed}: {name} changed medusa bytes")
            if name == "prune_certificates":
                off = res.engine.stats().certificates_built
                on = base.engine.stats().certificates_built
                if on >= off:
                    problems.append(
                        f"seed {seed}: pruning did not reduce certificates "
                        f"({on} on vs {off} off)"
                    )
                else:
                    ratios.append(off / on)
    mean_ratio = sum(ratios) / len(ratios) if ratios else 0.0
    emit(
        capsys,
        not problems,
        "4 optimization equivalence",
        f"{len(TOGGLE_COMBOS)} instances x 3 toggles byte-stable; "
        f"pruning reduction ratio {mean_ratio:.2f}x (target 1.5-2.5)"
        + (f"; {problems[0]}" if problems else ""),
    )


# ----------------------------------------------------------------------
# criterion 5: medusa invariants at every event


def test_criterion_5_medusa_invariants(suite_runs, capsys):
    bad = [f for ev in suite_runs for f in ev.invariant_failures]
    bad += [f for ev in suite_runs for f in ev.fill_violations]
    bad += [f for ev in suite_runs for f in ev.probe_failures]
    fills = sum(ev.flip_fills for ev in suite_runs)
    events = sum(ev.events for ev in suite_runs)
    ok = not bad and fills > 0
    emit(
        capsys,
        ok,
        "5 medusa invariants",
        f"{events} events checked, {fills} flip fills "
        f"(all 5-vertex, zero-length), lifetimes disjoint, "
        f"{len(bad)} violations" + (f"; first: {bad[0]}" if bad else ""),
    )


# ----------------------------------------------------------------------
# criterion 6: no Gabriel certificates are ever scheduled


def test_criterion_6_g_criticality(suite_runs, capsys):
    kinds = set().union(*(ev.kinds for ev in suite_runs))
    eng = KineticEngine(
        generate(*SUITE[0][:3], two_type_sorting=SUITE[0][4]).trajectories,
        F(SUITE[0][3]),
    )
    cert_stores = [a for a in vars(eng) if "cert" in a]
    gabriel_attrs = [a for a in vars(eng) if "gabriel" in a.lower()]
    clean = [f for ev in suite_runs for f in ev.probe_failures]
    ok = (
        kinds <= ALLOWED_KINDS
        and sorted(cert_stores) == ["_flip_certs", "_radius_certs"]
        and not gabriel_attrs
        and not clean
    )
    emit(
        capsys,
        ok,
        "6 G-criticality",
        f"event kinds {sorted(kinds)}, certificate stores "
        f"{sorted(cert_stores)}, no Gabriel queue entries, "
        f"suite probes clean",
    )


# ----------------------------------------------------------------------
# criterion 7: Descartes filter effectiveness (soft target, logged)


def test_criterion_7_filter_effectiveness(suite_runs, capsys):
    filtered = sum(ev.counters.get("certificates_filtered", 0) for ev in suite_runs)
    # certificates_no_root counts every rootless isolation call,
    # including the ones the fast path dismissed
    rootless = sum(ev.counters.get("certificates_no_root", 0) for ev in suite_runs)
    ok = rootless > 0
    frac = filtered / rootless if rootless else 0.0
    emit(
        capsys,
        ok,
        "7 filter effectiveness",
        f"{filtered}/{rootless} rootless certificates dismissed by the "
        f"fast path = {100 * frac:.1f}% (soft target 90%"
        f"{', met' if frac >= 0.9 else ', not met, logged'})",
    )


# ----------------------------------------------------------------------
# criterion 8: byte-identical replays


def test_criterion_8_determinism(capsys):
    diffs = []
    for seed, n, bends, alpha_sq, sorting in (SUITE[0], SUITE[6]):
        runs = [
            run_simulation(
                generate(seed, n, bends, two_type_sorting=sorting).trajectories,
                F(alpha_sq),
                probes=5,
                probe_seed=seed,
            )
            for _ in range(2)
        ]
        if runs[0].medusa_text != runs[1].medusa_text:
            diffs.append(f"seed {seed}: medusa bytes differ")
        if runs[0].stats_text != runs[1].stats_text:
            diffs.append(f"seed {seed}: stats bytes differ")
    emit(
        capsys,
        not diffs,
        "8 determinism",
        "repeated runs byte-identical (medusa and stats)"
        + (f"; {diffs[0]}" if diffs else ""),
    )
