"""Higher topological complexity TC_n through the path substitute S_n(X).

An element of S_n(X) is an L-step path f with n anchors lying on it.  Two
readings are supported:

``endpoint`` (default)
    f starts at the first anchor and ends at the last one; the middle anchors
    lie somewhere on f.  For n = 2 this is exactly the TC path fibration.
``membership``
    anchors only need to lie on f.  Here a single fixed walk through every
    point is a continuous global section, so TC_n collapses to 1 for every
    connected image; the mode exists to make that visible.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InputError, ParseError
from .lattice import CurveWitness, DigitalImage, detect_simple_closed_curve, is_connected
from .morph import DEFAULT_BUDGET, Homotopy, TriState, Verdict, bfs_maps, cycle_equivalence, is_contractible
from .planner import (
    DEFAULT_CSP_BUDGET,
    MotionPlanner,
    PlannerReport,
    TCResult,
    _CSP,
    band_planner,
    cycle_threshold,
    normalize,
    product_neighbors,
    tc_classify,
    verify_sections,
    walks,
)

ENDPOINT = "endpoint"
MEMBERSHIP = "membership"
_MODELS = (ENDPOINT, MEMBERSHIP)

# above this many adjacent-tuple comparisons, continuity checks are skipped unless forced
CONTINUITY_LIMIT = 20_000_000


@dataclass(frozen=True)
class AnchoredPath:
    steps: tuple
    anchors: tuple

    def in_substitute(self, model: str = ENDPOINT) -> bool:
        on = set(self.steps)
        if any(a not in on for a in self.anchors):
            return False
        if model == ENDPOINT and self.anchors:
            return self.steps[0] == self.anchors[0] and self.steps[-1] == self.anchors[-1]
        return True


def order_respecting(tup, ordering) -> bool:
    """Consecutive entries never step backwards in the cyclic order, except from p_m to p_1."""
    pos = {v: i for i, v in enumerate(ordering)}
    m = len(ordering)
    for a, b in zip(tup, tup[1:]):
        i, j = pos[a], pos[b]
        if i > j and not (i == m - 1 and j == 0):
            return False
    return True


@dataclass
class OrderPartition:
    ordering: tuple
    n: int
    A1: frozenset
    A2: frozenset

    @classmethod
    def build(cls, ordering, n: int) -> "OrderPartition":
        ordering = tuple(ordering)
        a1, a2 = set(), set()
        for tup in itertools.product(ordering, repeat=n):
            (a1 if order_respecting(tup, ordering) else a2).add(tup)
        return cls(ordering, n, frozenset(a1), frozenset(a2))

    def is_partition(self) -> bool:
        everything = set(itertools.product(self.ordering, repeat=self.n))
        return not (self.A1 & self.A2) and (self.A1 | self.A2) == everything


@dataclass
class HigherPlanner:
    image: DigitalImage
    n: int
    parts: list
    sections: list  # per part: tuple -> AnchoredPath
    length: int
    meta: dict = field(default_factory=dict)

    @property
    def k(self) -> int:
        return len(self.parts)

    def section(self, tup) -> AnchoredPath:
        for part, sec in zip(self.parts, self.sections):
            if tup in part:
                return sec[tup]
        raise KeyError(tup)

    def as_motion_planner(self) -> MotionPlanner:
        secs = [{t: ap.steps for t, ap in sec.items()} for sec in self.sections]
        return MotionPlanner(self.image, self.parts, secs, self.length, self.n, dict(self.meta))


def _continuity_cost(X: DigitalImage, n: int) -> int:
    deg = max((len(r) for r in X.nbrs), default=0) + 1
    return len(X) ** n * deg ** n


def verify_higher_planner(X: DigitalImage, plan: HigherPlanner, model: str = ENDPOINT,
                          check_continuity: Optional[bool] = None) -> PlannerReport:
    """Coverage of X^n, anchor identity, membership in S_n and per-part continuity.

    Continuity under the product adjacency of S_n: paths pointwise adjacent and
    anchors pointwise adjacent.  ``check_continuity=None`` checks it whenever
    the number of adjacent tuple pairs is below CONTINUITY_LIMIT.
    """
    if model not in _MODELS:
        raise InputError(f"unknown model {model!r}")
    if check_continuity is None:
        check_continuity = _continuity_cost(X, plan.n) <= CONTINUITY_LIMIT
    anchors = {}
    for sec in plan.sections:
        for t, ap in sec.items():
            anchors[t] = ap

    def anchor_check(tup, steps):
        ap = anchors[tup]
        if tuple(ap.anchors) != tuple(tup):
            return "anchor-identity"
        if not AnchoredPath(tuple(steps), ap.anchors).in_substitute(model):
            return "membership"
        return None

    report = verify_sections(X, plan.as_motion_planner(), anchor_check, check_continuity)
    if check_continuity:
        eq = X.eqadj
        for j, (part, sec) in enumerate(zip(plan.parts, plan.sections)):
            for t, ap in sec.items():
                if tuple(ap.anchors) == t:
                    continue
                for u in product_neighbors(X, t):
                    if u != t and u in part and not all(eq[a, b] for a, b in zip(ap.anchors, sec[u].anchors)):
                        report.violations.append(("anchor-continuity", j, t, u))
        report.ok = not report.violations
    return report


# ---------------------------------------------------------------------------
# constructions

def _clockwise(order, pos, a, b):
    m = len(order)
    d = (pos[b] - pos[a]) % m
    return [order[(pos[a] + t) % m] for t in range(d + 1)]


def _join(segments):
    out = list(segments[0])
    for seg in segments[1:]:
        out.extend(seg[1:])
    return out


def order_planner(C: CurveWitness, n: int) -> HigherPlanner:
    """Two parts from the order partition.

    A1: walk clockwise through the entries in tuple order.  A2: walk clockwise
    from the first entry through every other entry in cyclic order, then on to
    the last entry.  Short routes are padded with their endpoint.
    """
    order = C.ordering
    pos = C.position()
    part = OrderPartition.build(order, n)
    raw = [{}, {}]
    for tup in part.A1:
        raw[0][tup] = _join([_clockwise(order, pos, a, b) for a, b in zip(tup, tup[1:])]) if n > 1 else [tup[0]]
    for tup in part.A2:
        start = tup[0]
        rest = sorted(set(tup[1:]), key=lambda v: (pos[v] - pos[start]) % len(order))
        stops = [start] + rest + [tup[-1]]
        raw[1][tup] = _join([_clockwise(order, pos, a, b) for a, b in zip(stops, stops[1:])])
    L = max(len(p) - 1 for sec in raw for p in sec.values())
    secs = [{t: AnchoredPath(normalize(p, L), t) for t, p in sec.items()} for sec in raw]
    return HigherPlanner(C.image, n, [part.A1, part.A2], secs, L, {"construction": "order-partition"})


def loop_planner(C: CurveWitness, n: int) -> HigherPlanner:
    """Two parts taken from the two-part TC planner on (first, last) entry.

    The section runs once around the cycle starting at the first entry, which
    puts every entry on the path, then follows the TC section to the last entry.
    """
    base = band_planner(C)
    order = C.ordering
    pos = C.position()
    m = C.m
    loop = {a: [order[(pos[a] + t) % m] for t in range(m + 1)] for a in order}
    L = m + base.length
    parts = [set(), set()]
    secs = [{}, {}]
    for tup in itertools.product(order, repeat=n):
        a, b = tup[0], tup[-1]
        j = 0 if (a, b) in base.parts[0] else 1
        steps = tuple(loop[a] + list(base.sections[j][(a, b)][1:]))
        parts[j].add(tup)
        secs[j][tup] = AnchoredPath(steps, tup)
    meta = {"construction": "loop-then-section", "padding": n > m}
    return HigherPlanner(C.image, n, [frozenset(p) for p in parts], secs, L, meta)


def covering_walk(X: DigitalImage, root: int) -> list:
    """Closed walk from ``root`` visiting every point (depth-first tour)."""
    seen = {root}
    walk = [root]

    def visit(v):
        for u in X.nbrs[v]:
            if u not in seen:
                seen.add(u)
                walk.append(u)
                visit(u)
                walk.append(v)

    visit(root)
    if len(seen) != len(X):
        raise InputError("image is not connected")
    return walk


def _trajectories(stages, a):
    return [s[a] for s in stages]


def contraction_higher_planner(X: DigitalImage, n: int, H: Homotopy) -> HigherPlanner:
    """One part: contract the first entry to the base point, tour X, then run the contraction back to the last entry."""
    cols = [s.table for s in H.stages]
    x0 = cols[-1][0]
    tour = covering_walk(X, x0)
    down = {a: [c[a] for c in cols] for a in range(len(X))}
    sec = {}
    for tup in itertools.product(range(len(X)), repeat=n):
        steps = _join([down[tup[0]], tour, down[tup[-1]][::-1]])
        sec[tup] = AnchoredPath(tuple(steps), tup)
    L = 2 * H.steps + len(tour) - 1
    return HigherPlanner(X, n, [frozenset(sec)], [sec], L, {"construction": "contraction-tour"})


def _two_variable_planner(X: DigitalImage, n: int, G_stages) -> HigherPlanner:
    """One part from a homotopy G: pr1 -> pr2 of maps X×X -> X (tables indexed a*N + b)."""
    N = len(X)
    x0 = 0
    tour = covering_walk(X, x0)
    sec = {}
    for tup in itertools.product(range(N), repeat=n):
        head = [g[tup[0] * N + x0] for g in G_stages]
        tail = [g[x0 * N + tup[-1]] for g in G_stages]
        sec[tup] = AnchoredPath(tuple(_join([head, tour, tail])), tup)
    L = 2 * (len(G_stages) - 1) + len(tour) - 1
    return HigherPlanner(X, n, [frozenset(sec)], [sec], L, {"construction": "two-variable-homotopy"})


def synthesize_higher_planner(C: CurveWitness, n: int, verify: Optional[bool] = None) -> HigherPlanner:
    """Verified two-part planner for TC_n of a non-contractible cycle."""
    from .errors import SynthesisError

    if n < 2:
        raise InputError("n must be at least 2")
    if not C.check():
        raise InputError("not a simple closed curve witness")
    if C.m < cycle_threshold(C.image.kind):
        raise InputError(f"C_{C.m} with {C.image.kind.name}-adjacency is contractible; no two-part planner needed")
    X = C.image
    full = _continuity_cost(X, n) <= CONTINUITY_LIMIT if verify is None else verify
    tried = []
    if full:
        plan = order_planner(C, n)
        rep = verify_higher_planner(X, plan, check_continuity=True)
        tried.append(("order-partition", rep.ok, len(rep.violations)))
        if rep.ok:
            plan.meta["tried"] = tried
            return plan
    else:
        tried.append(("order-partition", "skipped", "continuity check too large"))
    plan = loop_planner(C, n)
    rep = verify_higher_planner(X, plan, check_continuity=full)
    tried.append(("loop-then-section", rep.ok, len(rep.violations)))
    plan.meta["tried"] = tried
    plan.meta["continuity_checked"] = full
    if not rep.ok:
        raise SynthesisError(f"no verified higher planner: {tried}")
    return plan


# ---------------------------------------------------------------------------
# refutation and classification

class _ProductGraph:
    """X^2 as a graph, tuples indexed a*N + b (lexicographic)."""

    def __init__(self, X: DigitalImage):
        N = len(X)
        self.tuples = list(itertools.product(range(N), repeat=2))
        nbrs = []
        for a, b in self.tuples:
            nbrs.append(tuple(sorted(u * N + v for u in X.closed_nbrs(a) for v in X.closed_nbrs(b) if (u, v) != (a, b))))
        self.nbrs = tuple(nbrs)

    def __len__(self):
        return len(self.tuples)


def anchored_walks(X: DigitalImage, n: int, L: int, model: str = ENDPOINT, cap: int = 2_000_000):
    """Domains for the genus-one CSP: per tuple, every L-step walk carrying the tuple as anchors."""
    N = len(X)
    ws = walks(X, L, cap)
    if ws is None:
        return None
    pool = [w for lst in ws.values() for w in lst]
    out = {}
    for tup in itertools.product(range(N), repeat=n):
        need = set(tup)
        cands = ws[(tup[0], tup[-1])] if model == ENDPOINT else pool
        out[tup] = [w for w in cands if need.issubset(w)]
    return out


def global_section_refuter(X: DigitalImage, n: int, L_max: Optional[int] = None,
                           budget: int = DEFAULT_CSP_BUDGET, model: str = ENDPOINT,
                           strategy: str = "auto", map_budget: int = DEFAULT_BUDGET) -> TriState:
    """Decide whether S_n(X) -> X^n admits one global continuous section.

    YES carries a one-part HigherPlanner; NO carries the refutation record.

    ``strategy="auto"`` first restricts to tuples (a, b, ..., b): a global
    section there is a homotopy pr1 ≃ pr2 of maps X×X -> X, which is decided
    by exhausting the component of pr1 (all lengths at once).  ``"csp"`` runs
    the constraint search over all tuples at length L_max directly; by endpoint
    padding, no section at L_max means none at any L <= L_max.
    """
    if model not in _MODELS:
        raise InputError(f"unknown model {model!r}")
    if not is_connected(X):
        raise InputError("global_section_refuter: image is not connected")
    if n < 1:
        raise InputError("n must be positive")
    N = len(X)
    if model == MEMBERSHIP:
        tour = covering_walk(X, 0)
        sec = {t: AnchoredPath(tuple(tour), t) for t in itertools.product(range(N), repeat=n)}
        plan = HigherPlanner(X, n, [frozenset(sec)], [sec], len(tour) - 1, {"construction": "fixed-tour"})
        return TriState(Verdict.YES, plan, "fixed-tour", {"model": model})
    if L_max is None:
        C = detect_simple_closed_curve(X)
        L_max = C.m if C is not None else 2 * int(X.distances().max())
    info = {"model": model, "L_max": L_max}
    if strategy == "auto" and n >= 2:
        P = _ProductGraph(X)
        pr1 = tuple(a for a, b in P.tuples)
        pr2 = tuple(b for a, b in P.tuples)
        res = bfs_maps(pr1, P, X, goal=lambda t: t == pr2, budget=map_budget)
        info.update(component_size=res.visited, map_search=res.status)
        if res.status == "exhausted":
            info["argument"] = ("a section on all of X^n restricts to tuples (a, b, ..., b), giving a "
                                "homotopy pr1 ≃ pr2 of maps X×X -> X; pr2 is not in the component of pr1")
            return TriState(Verdict.NO, None, "restriction+map-search", info)
        if res.status == "found":
            stages = res.path_to(res.goal)
            plan = _two_variable_planner(X, n, stages)
            rep = verify_higher_planner(X, plan)
            if rep.ok:
                return TriState(Verdict.YES, plan, "map-search", info)
    elif strategy not in ("auto", "csp"):
        raise InputError(f"unknown strategy {strategy!r}")
    doms = anchored_walks(X, n, L_max, model)
    if doms is None:
        info["csp"] = "domain-cap"
        return TriState(Verdict.UNKNOWN, None, "csp", info)
    csp = _CSP.over_tuples(X, doms, 1, budget)
    status, assign = csp.solve()
    info.update(csp=status, nodes=csp.nodes)
    if status == "unsat":
        return TriState(Verdict.NO, None, "csp", info)
    if status == "sat":
        sec = {v: AnchoredPath(tuple(int(x) for x in csp.dom[i][pi]), v) for i, (v, (_, pi)) in enumerate(zip(csp.vars, assign))}
        plan = HigherPlanner(X, n, [frozenset(sec)], [sec], L_max, {"construction": "csp"})
        return TriState(Verdict.YES, plan, "csp", info)
    return TriState(Verdict.UNKNOWN, None, "csp", info)


def tcn_classify(X: DigitalImage, n: int, budget: int = DEFAULT_BUDGET) -> TCResult:
    if not is_connected(X):
        raise InputError("tcn_classify: image is not connected")
    if n < 1:
        raise InputError("n must be positive")
    if n == 2:
        res = tc_classify(X, budget)
        res.notes["delegated"] = "TC_2 = TC"
        return res
    if n == 1:
        sec = {(a,): AnchoredPath((a,), (a,)) for a in range(len(X))}
        plan = HigherPlanner(X, 1, [frozenset(sec)], [sec], 0, {"construction": "constant"})
        return TCResult(1, "rule", plan, None, {"rule": "n = 1"})
    c = is_contractible(X, budget)
    if c.yes:
        if c.certificate is not None:
            plan = contraction_higher_planner(X, n, c.certificate)
            rep = verify_higher_planner(X, plan)
            if rep.ok:
                method = "rule" if X.dim == 1 else "certificate"
                return TCResult(1, method, plan, None, {"continuity_checked": rep.continuity_checked})
        return TCResult(1, "rule", None, None, {"contractible": c.method})
    if c.unknown:
        return TCResult(None, "rule", None, c, {"reason": "contractibility undecided within budget"})
    ce = cycle_equivalence(X, budget)
    if ce is not None:
        m, equiv = ce
        C = detect_simple_closed_curve(equiv.forward.target)
        if m >= cycle_threshold(C.image.kind):
            plan = synthesize_higher_planner(C, n)
            notes = {"cycle_m": m}
            if C.image != X:
                notes["equivalence"] = equiv
                notes["transfer"] = "homotopy invariance; witness lives on the equivalent cycle"
            return TCResult(2, "certificate", plan, c, notes)
    return TCResult(None, "rule", None, c, {"reason": "not contractible and not equivalent to a long cycle"})


# ---------------------------------------------------------------------------
# fibrational substitute

def substitute_elements(X: DigitalImage, n: int, L: int, model: str = ENDPOINT, cap: int = 200_000) -> list:
    doms = anchored_walks(X, n, L, model, cap)
    if doms is None:
        return None
    out = []
    for tup, ws in doms.items():
        out.extend(AnchoredPath(w, tup) for w in ws)
    return out


def _rows(elems):
    return np.asarray([e.steps + e.anchors for e in elems], dtype=np.int64)


def _adjacent_pairs(rows, eq, chunk=512):
    """All index pairs (i < j) of rows that are pointwise equal-or-adjacent."""
    out = []
    for s in range(0, len(rows), chunk):
        block = rows[s:s + chunk]
        ok = np.ones((len(block), len(rows)), dtype=bool)
        for c in range(rows.shape[1]):
            ok &= eq[block[:, c][:, None], rows[:, c][None, :]].astype(bool)
        ii, jj = np.nonzero(ok)
        ii = ii + s
        keep = jj > ii
        out.append(np.stack([ii[keep], jj[keep]], axis=1))
    return np.concatenate(out) if out else np.zeros((0, 2), dtype=np.int64)


def check_fibrational_substitute(X: DigitalImage, n: int, L: Optional[int] = None,
                                 model: str = ENDPOINT, max_elements: int = 20_000) -> TriState:
    """Check that h(x) = (constant path at x, x, ..., x) is a homotopy equivalence X -> S_n(X).

    With k(f, p) = f(0), k∘h is the identity.  For h∘k ≃ id the path is cut
    back one step at a time towards its start, with the last anchor riding on
    the cut end; for n = 2 this is the whole construction and is verified
    stage by stage over the materialised S_2.  For n >= 3 the middle anchors
    have no continuous rule of this kind and the verdict is unknown unless S_n
    is a single point.
    """
    if not is_connected(X):
        raise InputError("check_fibrational_substitute: image is not connected")
    if n < 2:
        raise InputError("n must be at least 2")
    N = len(X)
    if L is None:
        C = detect_simple_closed_curve(X)
        L = C.m if C is not None else max(1, 2 * int(X.distances().max()))
    h = [AnchoredPath((x,) * (L + 1), (x,) * n) for x in range(N)]
    if not all(e.in_substitute(model) and e.anchors == (x,) * n for x, e in enumerate(h)):
        return TriState(Verdict.NO, None, "direct", {"failed": "h does not land in S_n over the diagonal"})
    info = {"L": L, "n": n, "model": model, "k_after_h": "identity"}
    if N == 1:
        info["h_after_k"] = "S_n is a single point"
        return TriState(Verdict.YES, {"h": h}, "direct", info)
    if n > 2 or model != ENDPOINT:
        info["reason"] = "no verified construction for middle anchors"
        return TriState(Verdict.UNKNOWN, None, "direct", info)
    S = substitute_elements(X, n, L, model, cap=max_elements * 4)
    if S is None or len(S) > max_elements:
        info["reason"] = "S_n too large to materialise"
        return TriState(Verdict.UNKNOWN, None, "direct", info)
    index = {e: i for i, e in enumerate(S)}
    stages = []
    for t in range(L + 1):
        cut = L - t
        tbl = []
        for e in S:
            steps = tuple(e.steps[min(s, cut)] for s in range(L + 1))
            img = AnchoredPath(steps, (e.anchors[0], steps[-1]))
            tbl.append(index[img])
        stages.append(tbl)
    rows = _rows(S)
    eq = X.eqadj
    pairs = _adjacent_pairs(rows, eq)
    for t, tbl in enumerate(stages):
        mapped = rows[np.asarray(tbl)]
        if pairs.size and not all(eq[mapped[pairs[:, 0], c], mapped[pairs[:, 1], c]].all() for c in range(rows.shape[1])):
            return TriState(Verdict.NO, None, "direct", dict(info, failed=f"stage {t} is not continuous"))
        if t:
            prev = rows[np.asarray(stages[t - 1])]
            if not all(eq[prev[:, c], mapped[:, c]].all() for c in range(rows.shape[1])):
                return TriState(Verdict.NO, None, "direct", dict(info, failed=f"stages {t - 1}, {t} not adjacent"))
    last = stages[-1]
    hk = [index[h[e.steps[0]]] for e in S]
    if stages[0] != list(range(len(S))) or last != hk:
        return TriState(Verdict.NO, None, "direct", dict(info, failed="homotopy has wrong ends"))
    info.update(elements=len(S), adjacent_pairs=int(len(pairs)), stages=len(stages))
    return TriState(Verdict.YES, {"h": h, "stages": stages, "elements": S}, "direct", info)


# ---------------------------------------------------------------------------
# text format

def serialize_higher_planner(plan: HigherPlanner) -> str:
    from .planner import serialize_planner

    return serialize_planner(plan.as_motion_planner())


def parse_higher_planner(text: str, X: DigitalImage, source: Optional[str] = None) -> HigherPlanner:
    from .planner import parse_planner

    mp = parse_planner(text, X, source)
    secs = [{t: AnchoredPath(p, t) for t, p in sec.items()} for sec in mp.sections]
    if any(len(t) != mp.n for sec in secs for t in sec):
        raise ParseError("tuple arity does not match 'n'", None, source)
    return HigherPlanner(X, mp.n, mp.parts, secs, mp.length)
