import pytest

from conftest import C6_POINTS, K2, K4, K8, interval
from digitop import DigitalImage, InputError, cycle_witness, detect_simple_closed_curve, tc_classify
from digitop.higher import (
    MEMBERSHIP,
    AnchoredPath,
    OrderPartition,
    check_fibrational_substitute,
    covering_walk,
    global_section_refuter,
    loop_planner,
    order_planner,
    order_respecting,
    parse_higher_planner,
    serialize_higher_planner,
    synthesize_higher_planner,
    tcn_classify,
    verify_higher_planner,
)
from digitop.morph import Verdict


def _p(X, *labels):
    """Indices of p_i (1-based) on the C_6 ordering."""
    return tuple(X.index[C6_POINTS[i - 1]] for i in labels)


@pytest.fixture
def order6(c6):
    return _p(c6, 1, 2, 3, 4, 5, 6)


def test_order_respecting_examples(c6, order6):
    assert order_respecting(_p(c6, 1, 2, 4), order6)
    assert not order_respecting(_p(c6, 2, 1, 3), order6)
    assert order_respecting(_p(c6, 6, 1, 2), order6)


@pytest.mark.parametrize("m", range(1, 11))
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_order_partition_is_partition(m, n):
    if m ** n > 5000:
        pytest.skip("large product")
    part = OrderPartition.build(tuple(range(m)), n)
    assert part.is_partition()


def test_anchored_path_models():
    ap = AnchoredPath((0, 1, 2), (0, 2, 2))
    assert ap.in_substitute()
    off = AnchoredPath((0, 1, 2), (1, 0, 2))
    assert not off.in_substitute() and off.in_substitute(MEMBERSHIP)
    assert not AnchoredPath((0, 1), (0, 5)).in_substitute(MEMBERSHIP)


# synthesis and verification


@pytest.mark.parametrize("m,kind,n", [(6, K8, 3), (8, K4, 3), (6, K8, 4)])
def test_higher_planner_synthesis(m, kind, n):
    C = cycle_witness(m, kind)
    plan = synthesize_higher_planner(C, n)
    assert plan.k == 2
    rep = verify_higher_planner(C.image, plan, check_continuity=True)
    assert rep.ok and rep.continuity_checked
    assert plan.meta["tried"][0][:2] == ("order-partition", False)


def test_anchors_equal_tuples_everywhere(c6):
    plan = synthesize_higher_planner(detect_simple_closed_curve(c6), 3)
    for sec in plan.sections:
        for tup, ap in sec.items():
            assert ap.anchors == tup
            assert ap.in_substitute()


def test_padding_case_n_larger_than_m():
    C = cycle_witness(6, K8)
    plan = loop_planner(C, 7)
    assert plan.meta["padding"]
    rep = verify_higher_planner(C.image, plan, check_continuity=False)
    assert rep.ok and not rep.continuity_checked


def test_order_planner_breaks_continuity():
    C = cycle_witness(6, K8)
    rep = verify_higher_planner(C.image, order_planner(C, 3), check_continuity=True)
    assert not rep.ok
    assert all(v[0] == "continuity" for v in rep.violations)


def test_wrong_anchors_are_reported(c6):
    plan = synthesize_higher_planner(detect_simple_closed_curve(c6), 3)
    tup = next(t for t in sorted(plan.parts[0]) if t[0] != t[1])
    ap = plan.sections[0][tup]
    other = (tup[1], tup[0], tup[2])
    plan.sections[0][tup] = AnchoredPath(ap.steps, other)
    rep = verify_higher_planner(c6, plan, check_continuity=False)
    assert ("anchor-identity", 0, tup) in rep.violations


def test_membership_violation_is_detected(c6):
    plan = synthesize_higher_planner(detect_simple_closed_curve(c6), 3)
    a, b = _p(c6, 1, 2)
    c = _p(c6, 4)[0]
    tup = (a, c, b)
    j = next(j for j, part in enumerate(plan.parts) if tup in part)
    plan.sections[j][tup] = AnchoredPath((a,) * plan.length + (b,), tup)
    rep = verify_higher_planner(c6, plan, check_continuity=False)
    assert ("membership", j, tup) in rep.violations


def test_second_part_continuity_break_is_reported(c6):
    plan = synthesize_higher_planner(detect_simple_closed_curve(c6), 3)
    sec = plan.sections[1]
    tup = sorted(sec)[0]
    old = sec[tup]
    # reverse the loop direction of one section, keeping anchors and ends
    m = 6
    loop = list(old.steps[: m + 1])
    new = tuple([loop[0]] + loop[1:m][::-1] + [loop[m]] + list(old.steps[m + 1:]))
    sec[tup] = AnchoredPath(new, tup)
    rep = verify_higher_planner(c6, plan, check_continuity=True)
    assert not rep.ok
    pairs = [v for v in rep.violations if v[0] == "continuity"]
    assert pairs and all(tup in v[2:] for v in pairs)


def test_synthesis_preconditions():
    with pytest.raises(InputError):
        synthesize_higher_planner(cycle_witness(4, K4), 3)
    with pytest.raises(InputError):
        synthesize_higher_planner(cycle_witness(6, K8), 1)


# refutation


def test_refuter_one_point():
    X = DigitalImage([(0, 0)], K8)
    r = global_section_refuter(X, 2)
    assert r.verdict is Verdict.YES


def test_refuter_interval():
    X = interval(3)
    r = global_section_refuter(X, 2)
    assert r.verdict is Verdict.YES
    assert verify_higher_planner(X, r.certificate)
    r = global_section_refuter(X, 2, L_max=4, strategy="csp")
    assert r.verdict is Verdict.YES and r.method == "csp"


def test_refuter_c6_n3_map_route(c6):
    r = global_section_refuter(c6, 3, L_max=8)
    assert r.verdict is Verdict.NO
    assert r.method == "restriction+map-search"
    assert r.info["map_search"] == "exhausted"


def test_refuter_c6_n2_csp_route(c6):
    r = global_section_refuter(c6, 2, L_max=6, strategy="csp")
    assert r.verdict is Verdict.NO and r.method == "csp"


def test_refuter_budget_is_unknown(c6):
    r = global_section_refuter(c6, 3, L_max=8, strategy="csp", budget=3)
    assert r.verdict is Verdict.UNKNOWN


def test_membership_model_collapses(c6):
    r = global_section_refuter(c6, 3, model=MEMBERSHIP)
    assert r.verdict is Verdict.YES
    rep = verify_higher_planner(c6, r.certificate, model=MEMBERSHIP, check_continuity=True)
    assert rep.ok
    assert not verify_higher_planner(c6, r.certificate, check_continuity=False).ok


def test_covering_walk_visits_everything(pendant):
    w = covering_walk(pendant, 0)
    assert set(w) == set(range(len(pendant)))
    assert w[0] == w[-1] == 0
    assert all(pendant.eqadj[a, b] for a, b in zip(w, w[1:]))


# classification


def test_tcn_one_point():
    r = tcn_classify(DigitalImage([(0, 0)], K8), 5)
    assert r.value == 1


def test_tcn_interval():
    X = interval(4)
    r = tcn_classify(X, 3)
    assert r.value == 1
    assert verify_higher_planner(X, r.witness, check_continuity=True)


def test_tcn_pendant(pendant):
    r = tcn_classify(pendant, 3)
    assert r.value == 2
    assert r.notes["equivalence"].check()
    assert verify_higher_planner(r.witness.image, r.witness)


def test_tcn_two_delegates(c6, pendant):
    for X in (c6, pendant, interval(3)):
        assert tcn_classify(X, 2).value == tc_classify(X).value


def test_tcn_disconnected():
    with pytest.raises(InputError):
        tcn_classify(DigitalImage([(0,), (2,)], K2), 3)


def test_tcn_rule_branch_unknown():
    left = C6_POINTS
    X = DigitalImage(set(left) | {(x + 3, y) for x, y in left}, K8)
    r = tcn_classify(X, 3)
    assert r.value is None
    assert r.lower_bound_evidence.no


# substitute


def test_substitute_one_point():
    r = check_fibrational_substitute(DigitalImage([(0,)], K2), 4)
    assert r.verdict is Verdict.YES


def test_substitute_edge_n2():
    r = check_fibrational_substitute(interval(2), 2)
    assert r.verdict is Verdict.YES
    assert r.info["elements"] == len(r.certificate["elements"])


def test_substitute_c6_n2(c6):
    assert check_fibrational_substitute(c6, 2, L=3).verdict is Verdict.YES


def test_substitute_middle_anchors_unknown(c6):
    r = check_fibrational_substitute(c6, 3, L=6)
    assert r.verdict is Verdict.UNKNOWN


# text format


def test_higher_round_trip(c6):
    plan = synthesize_higher_planner(detect_simple_closed_curve(c6), 3)
    text = serialize_higher_planner(plan)
    assert "\nn 3\n" in text
    back = parse_higher_planner(text, c6)
    assert back.n == 3 and back.length == plan.length
    assert back.sections == plan.sections
    assert verify_higher_planner(c6, back)
