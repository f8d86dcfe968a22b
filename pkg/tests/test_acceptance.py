"""Acceptance criteria, one test each, exact equality throughout.

Every test prints a single ``PASS``/``FAIL`` line with output capture
suspended, so it shows up under ``pytest -v`` without ``-s``.  Run standalone with
``python tests/test_acceptance.py``.
"""
import subprocess
import sys
import time
from pathlib import Path

import pytest

from conftest import C6_POINTS, K2, K4, K8
from digitop import (
    DigitalImage,
    connected_images,
    count_loop_classes,
    cycle_witness,
    generate_cycle,
    homotopy_equivalent,
    is_contractible,
    search_cycles,
    synthesize_higher_planner,
    tc_classify,
    tc_oracle,
    tcn_classify,
    verify_planner,
)
from digitop.higher import global_section_refuter, verify_higher_planner

HERE = Path(__file__).resolve().parent
_capture = {}


@pytest.fixture(autouse=True)
def _uncaptured(capsys):
    _capture["capsys"] = capsys
    yield
    _capture.clear()


def report(n, ok, detail, elapsed, limit):
    timing = f"{elapsed:.1f}s (limit {limit}s)"
    line = f"{'PASS' if ok and elapsed < limit else 'FAIL'} criterion {n}: {detail} [{timing}]"
    with _capture["capsys"].disabled():
        print("\n" + line, flush=True)
    assert ok, line
    assert elapsed < limit, line


def _certified_contraction(X, c):
    H = c.certificate
    return (c.yes and H is not None and H.check()
            and H.start.table == tuple(range(len(X))) and len(set(H.end.table)) == 1)


# 1 -------------------------------------------------------------------------

CYCLE_TABLE = [(4, K4, 1), (4, K8, 1), (6, K8, 2), (7, K8, 2), (8, K8, 2), (8, K4, 2), (10, K4, 2), (12, K4, 2)]


def test_criterion_1_cycle_tc_table():
    rows, ok, worst = [], True, 0.0
    for m, kind, want in CYCLE_TABLE:
        t0 = time.perf_counter()
        X = generate_cycle(m, kind)
        r = tc_classify(X)
        good = (r.value == want and r.witness is not None and r.witness.k == want
                and verify_planner(X, r.witness).ok)
        if want == 2:
            good = good and r.lower_bound_evidence is not None and r.lower_bound_evidence.no
        worst = max(worst, time.perf_counter() - t0)
        ok &= good
        rows.append(f"C{m}/k{kind.name}={r.value}")
    report(1, ok, " ".join(rows), worst, 60)


# 2 -------------------------------------------------------------------------

def test_criterion_2_oracle_agreement():
    t0 = time.perf_counter()
    agree = disagree = undecided = 0
    bad = []
    for kind in (K4, K8):
        for X in connected_images(kind, 3, 6):
            a = tc_classify(X)
            b = tc_oracle(X, budget=1_000_000)
            if a.value is None or b.value is None:
                undecided += 1
            elif a.value == b.value:
                agree += 1
            else:
                disagree += 1
                bad.append(X.points)
    report(2, disagree == 0 and agree > 0,
           f"{agree} agree, {disagree} disagree, {undecided} without two definite verdicts {bad[:3]}",
           time.perf_counter() - t0, 1800)


# 3 -------------------------------------------------------------------------

def test_criterion_3_one_dimensional():
    t0 = time.perf_counter()
    ok, checked = True, 0
    for size in range(1, 11):
        X = DigitalImage([(i,) for i in range(-3, size - 3)], K2)
        r2 = tc_classify(X)
        ok &= r2.value == 1 and r2.witness.k == 1 and verify_planner(X, r2.witness).ok
        r3 = tcn_classify(X, 3)
        ok &= r3.value == 1 and r3.witness.k == 1 and verify_higher_planner(X, r3.witness, check_continuity=True).ok
        checked += 2
    report(3, ok, f"{checked} (image, n) cases give 1 with a verified one-part section",
           time.perf_counter() - t0, 300)


# 4 -------------------------------------------------------------------------

def test_criterion_4_small_images_contractible():
    t0 = time.perf_counter()
    counts, failures = {}, []
    for kind in (K4, K8):
        for X in connected_images(kind, 3, 5):
            c = is_contractible(X)
            if not _certified_contraction(X, c):
                failures.append((kind.name, X.points))
            counts[len(X)] = counts.get(len(X), 0) + 1
    report(4, not failures and counts.get(5, 0) > 0,
           f"images by size {dict(sorted(counts.items()))}, uncertified {failures[:3]}",
           time.perf_counter() - t0, 1800)


# 5 -------------------------------------------------------------------------

def test_criterion_5_curve_emptiness():
    t0 = time.perf_counter()
    # an m-point connected set always fits in an m x m box, so window m is conclusive
    empty = [(5, K4), (5, K8), (6, K4), (7, K4)]
    nonempty = [(6, K8), (8, K4)]
    found = {(m, k.name): len(search_cycles(m, k, m)) for m, k in empty + nonempty}
    ok = all(found[(m, k.name)] == 0 for m, k in empty) and all(found[(m, k.name)] > 0 for m, k in nonempty)
    report(5, ok, " ".join(f"C{m}/k{k}:{n}" for (m, k), n in found.items()), time.perf_counter() - t0, 600)


# 6 -------------------------------------------------------------------------

def test_criterion_6_higher_tc_exact():
    t0 = time.perf_counter()
    ok = True
    parts = []
    for m, kind in ((6, K8), (8, K4)):
        C = cycle_witness(m, kind)
        plan = synthesize_higher_planner(C, 3)
        rep = verify_higher_planner(C.image, plan, check_continuity=True)
        ok &= plan.k == 2 and rep.ok and rep.continuity_checked
        parts.append(f"C{m}/k{kind.name} planner parts={plan.k} verified={rep.ok}")
    X = generate_cycle(6, K8)
    by_maps = global_section_refuter(X, 3, L_max=8, strategy="auto")
    by_csp = global_section_refuter(X, 3, L_max=8, strategy="csp")
    ok &= by_maps.no and by_maps.method == "restriction+map-search"
    ok &= by_csp.no and by_csp.method == "csp"
    r = tcn_classify(X, 3)
    ok &= r.value == 2
    parts.append(f"refuter map-search={by_maps.verdict.value} csp@8={by_csp.verdict.value}; TC_3(C6)={r.value}")
    report(6, ok, "; ".join(parts), time.perf_counter() - t0, 3600)


# 7 -------------------------------------------------------------------------

def test_criterion_7_padding_and_larger_n():
    t0 = time.perf_counter()
    ok = True
    parts = []
    for m, kind, n in ((6, K8, 4), (8, K4, 3)):
        C = cycle_witness(m, kind)
        plan = synthesize_higher_planner(C, n)
        rep = verify_higher_planner(C.image, plan, check_continuity=True)
        ok &= plan.k == 2 and rep.ok
        parts.append(f"C{m}/k{kind.name} n={n} verified={rep.ok}")
    C = cycle_witness(6, K8)
    plan = synthesize_higher_planner(C, 7)
    rep = verify_higher_planner(C.image, plan, check_continuity=False)
    anchors = all(ap.anchors == t for sec in plan.sections for t, ap in sec.items())
    covered = sum(len(p) for p in plan.parts) == 6 ** 7
    ok &= plan.k == 2 and rep.ok and anchors and covered and plan.meta.get("padding")
    parts.append(f"C6 n=7 padding anchors-identity={anchors} tuples={sum(len(p) for p in plan.parts)}")
    report(7, ok, "; ".join(parts), time.perf_counter() - t0, 1800)


# 8 -------------------------------------------------------------------------

def _with(points, extra, kind):
    return DigitalImage(list(points) + list(extra), kind)


def equivalent_pairs():
    pairs = []
    for kind in (K8, K4):
        imgs = [X for X in connected_images(kind, 3, 5) if len(X) >= 2]
        step = max(1, len(imgs) // 8)
        chosen = imgs[::step][:8]
        pairs += [(a, b) for a, b in zip(chosen, chosen[1:])]
    c6 = C6_POINTS
    c7 = generate_cycle(7, K8).points
    c8 = generate_cycle(8, K4).points
    pairs += [
        (DigitalImage(c6, K8), _with(c6, [(4, 0)], K8)),
        (DigitalImage(c6, K8), _with(c6, [(4, 0), (-1, 0)], K8)),
        (_with(c6, [(4, 0)], K8), _with(c6, [(-1, 0), (-2, 0)], K8)),
        (DigitalImage(c7, K8), _with(c7, [(-1, 0)], K8)),
        (DigitalImage(c8, K4), _with(c8, [(-1, 1)], K4)),
        (DigitalImage(c8, K4), _with(c8, [(-1, 1), (-2, 1)], K4)),
        (DigitalImage(generate_cycle(8, K8).points, K8), _with(generate_cycle(8, K8).points, [(-1, 0)], K8)),
        (DigitalImage(c6, K8), _with([(x + 5, y + 5) for x, y in c6], [(9, 5)], K8)),
    ]
    return pairs


def test_criterion_8_invariance():
    t0 = time.perf_counter()
    pairs = equivalent_pairs()
    certified = 0
    mismatches = []
    for X, Y in pairs:
        e = homotopy_equivalent(X, Y)
        if not (e.yes and e.certificate.check()):
            mismatches.append(("uncertified", X.points, Y.points))
            continue
        certified += 1
        lx = [count_loop_classes(X, m).count for m in (1, 2, 3)]
        ly = [count_loop_classes(Y, m).count for m in (1, 2, 3)]
        tx, ty = tc_classify(X).value, tc_classify(Y).value
        hx, hy = tcn_classify(X, 3).value, tcn_classify(Y, 3).value
        if lx != ly or tx != ty or hx != hy or None in (tx, hx):
            mismatches.append((X.points, Y.points, lx, ly, tx, ty, hx, hy))
    report(8, certified >= 20 and not mismatches,
           f"{certified} certified pairs; L_1..L_3, TC and TC_3 equal on each; mismatches {mismatches[:2]}",
           time.perf_counter() - t0, 1800)


# 9 -------------------------------------------------------------------------

def test_criterion_9_property_suite():
    t0 = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", str(HERE / "test_properties.py")],
        capture_output=True, text=True, cwd=HERE.parent,
    )
    summary = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr[-200:]
    report(9, proc.returncode == 0, f"standalone property suite: {summary}", time.perf_counter() - t0, 1800)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
