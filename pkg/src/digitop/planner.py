"""Digital paths, motion planners, TC classification and a brute-force TC oracle.

A planner covers X×X (or X^n, see :mod:`digitop.higher`) with parts; each
part carries a section table assigning a path of a common length L to every
tuple in the part.  Paths of different lengths are compared after padding the
shorter one with its endpoint.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .errors import InputError, ParseError, SynthesisError
from .lattice import CurveWitness, DigitalImage, detect_simple_closed_curve, is_connected
from .morph import (
    DEFAULT_BUDGET,
    Homotopy,
    TriState,
    Verdict,
    cycle_equivalence,
    is_contractible,
)

DEFAULT_CSP_BUDGET = 10_000_000


class DigitalPath:
    """A step sequence in an image; consecutive steps equal or adjacent."""

    __slots__ = ("image", "steps")

    def __init__(self, image: DigitalImage, steps: Sequence[int]):
        steps = tuple(int(s) for s in steps)
        if not steps:
            raise InputError("a path needs at least one step")
        eq = image.eqadj
        for a, b in zip(steps, steps[1:]):
            if not eq[a, b]:
                raise InputError(
                    f"path jumps from {image.points[a]} to {image.points[b]}, which are not adjacent"
                )
        self.image = image
        self.steps = steps

    @classmethod
    def from_points(cls, image: DigitalImage, pts) -> "DigitalPath":
        try:
            return cls(image, [image.index[tuple(p)] for p in pts])
        except KeyError as exc:
            raise InputError(f"path point {exc} is not in the image") from None

    @property
    def length(self) -> int:
        return len(self.steps) - 1

    @property
    def start(self):
        return self.steps[0]

    @property
    def end(self):
        return self.steps[-1]

    def points(self) -> list:
        return [self.image.points[s] for s in self.steps]

    def normalized(self, L: int) -> "DigitalPath":
        return DigitalPath(self.image, normalize(self.steps, L))

    def __eq__(self, other):
        return isinstance(other, DigitalPath) and self.steps == other.steps and self.image == other.image

    def __hash__(self):
        return hash(self.steps)

    def __repr__(self):
        return f"DigitalPath({self.points()})"


def normalize(steps: Sequence[int], L: int) -> tuple:
    """Pad a step sequence to exactly L steps by repeating its endpoint."""
    steps = tuple(steps)
    if len(steps) - 1 > L:
        raise InputError(f"path with {len(steps) - 1} steps does not fit length {L}")
    return steps + (steps[-1],) * (L + 1 - len(steps))


def concat_paths(f: DigitalPath, g: DigitalPath) -> DigitalPath:
    if f.image != g.image:
        raise InputError("paths live in different images")
    if f.end != g.start:
        raise InputError(
            f"cannot concatenate: first path ends at {f.image.points[f.end]}, "
            f"second starts at {g.image.points[g.start]}"
        )
    return DigitalPath(f.image, f.steps + g.steps[1:])


def paths_adjacent(f: DigitalPath, g: DigitalPath, L: Optional[int] = None) -> bool:
    if L is None:
        L = max(f.length, g.length)
    a, b = normalize(f.steps, L), normalize(g.steps, L)
    eq = f.image.eqadj
    return all(eq[x, y] for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# planners

@dataclass
class MotionPlanner:
    """Parts of X^n with one section table per part.

    Keys of ``sections[j]`` are n-tuples of point indices; values are step
    tuples of length ``length + 1``.  For ordinary TC, n = 2.
    """

    image: DigitalImage
    parts: list
    sections: list
    length: int
    n: int = 2
    meta: dict = field(default_factory=dict)

    @property
    def k(self) -> int:
        return len(self.parts)

    def section(self, tup) -> tuple:
        for part, sec in zip(self.parts, self.sections):
            if tup in part:
                return sec[tup]
        raise KeyError(tup)

    def path(self, *pts) -> DigitalPath:
        X = self.image
        return DigitalPath(X, self.section(tuple(X.index[tuple(p)] for p in pts)))


@dataclass
class PlannerReport:
    ok: bool
    violations: list = field(default_factory=list)
    checked_pairs: int = 0
    continuity_checked: bool = True

    def __bool__(self):
        return self.ok

    def summary(self, X: DigitalImage, limit: int = 10) -> str:
        if self.ok:
            return f"ok ({self.checked_pairs} adjacent pairs checked)"
        lines = [f"{len(self.violations)} violation(s)"]
        for v in self.violations[:limit]:
            kind, *rest = v
            lines.append(f"  {kind}: " + "; ".join(_fmt_tuple(X, r) if isinstance(r, tuple) else str(r) for r in rest))
        return "\n".join(lines)


def _fmt_tuple(X, tup):
    return "(" + ", ".join(str(X.points[i]) for i in tup) + ")"


def product_neighbors(X: DigitalImage, tup) -> itertools.product:
    """Closed product neighbourhood of a tuple in X^n (includes the tuple itself)."""
    return itertools.product(*[X.closed_nbrs(v) for v in tup])


def verify_sections(X: DigitalImage, plan: MotionPlanner, anchor_check, check_continuity: bool = True,
                    max_violations: int = 1000) -> PlannerReport:
    """Shared checker for TC and higher planners.

    ``anchor_check(tup, steps)`` returns an error label or None.
    """
    n, L = plan.n, plan.length
    N = len(X)
    violations = []
    covered = set()
    for part in plan.parts:
        covered.update(part)
    for tup in itertools.product(range(N), repeat=n):
        if tup not in covered:
            violations.append(("coverage", tup))
            if len(violations) >= max_violations:
                return PlannerReport(False, violations)
    eq = X.eqadj
    checked = 0
    for j, (part, sec) in enumerate(zip(plan.parts, plan.sections)):
        tuples = sorted(part)
        missing = [t for t in tuples if t not in sec]
        if missing:
            raise InputError(f"part {j} has no section for {_fmt_tuple(X, missing[0])}")
        idx = {t: i for i, t in enumerate(tuples)}
        rows = []
        for t in tuples:
            steps = sec[t]
            if len(steps) != L + 1:
                violations.append(("length", j, t, len(steps) - 1))
                steps = normalize(steps[: L + 1], L)
            for a, b in zip(steps, steps[1:]):
                if not eq[a, b]:
                    violations.append(("not-a-path", j, t))
                    break
            label = anchor_check(t, steps)
            if label:
                violations.append((label, j, t))
            rows.append(steps)
        if not check_continuity or not tuples:
            continue
        paths = np.asarray(rows, dtype=np.int64)
        pairs = []
        for t in tuples:
            i = idx[t]
            for u in product_neighbors(X, t):
                k = idx.get(u)
                if k is not None and k > i:
                    pairs.append((i, k))
        checked += len(pairs)
        if pairs:
            pairs = np.asarray(pairs, dtype=np.int64)
            for b in _kernels.pair_violations(paths, pairs, eq)[: max_violations]:
                i, k = pairs[b]
                violations.append(("continuity", j, tuples[i], tuples[k]))
        if len(violations) >= max_violations:
            break
    return PlannerReport(not violations, violations, checked, check_continuity)


def verify_planner(X: DigitalImage, plan: MotionPlanner) -> PlannerReport:
    """Coverage of X×X, endpoints (π∘s = id) and continuity of every section."""
    if plan.n != 2:
        raise InputError("verify_planner expects a planner on X×X")
    L = plan.length

    def endpoints(tup, steps):
        if steps[0] != tup[0] or steps[L] != tup[1]:
            return "endpoint"
        return None

    return verify_sections(X, plan, endpoints)


# ---------------------------------------------------------------------------
# constructions

def _cyc_steps(order, start_pos, delta, L):
    """Route ``delta`` positions along the cyclic order (sign = direction), padded to L."""
    m = len(order)
    sgn = 1 if delta >= 0 else -1
    steps = [order[(start_pos + sgn * t) % m] for t in range(abs(delta) + 1)]
    return normalize(steps, L)


def band_planner(C: CurveWitness, L: Optional[int] = None) -> MotionPlanner:
    """Two-part planner on a cycle split by cyclic distance.

    Part 1 holds pairs at cyclic distance <= r = (m-3)//2 and routes them along
    the shorter arc; part 2 holds the rest and always routes clockwise.  With
    2r + 2 < m, adjacent pairs in one part never flip direction.
    """
    m = C.m
    if m < 5:
        raise InputError("band planner needs m >= 5")
    L = m if L is None else L
    r = (m - 3) // 2
    pos = C.position()
    order = C.ordering
    parts = [set(), set()]
    secs = [{}, {}]
    for a in order:
        for b in order:
            d = (pos[b] - pos[a]) % m
            if d <= r:
                j, delta = 0, d
            elif m - d <= r:
                j, delta = 0, d - m
            else:
                j, delta = 1, d
            parts[j].add((a, b))
            secs[j][(a, b)] = _cyc_steps(order, pos[a], delta, L)
    return MotionPlanner(C.image, [frozenset(p) for p in parts], secs, L, meta={"construction": "distance-band", "r": r})


def arc_split_planner(C: CurveWitness, cut: int = 0, L: Optional[int] = None) -> MotionPlanner:
    """The two-arc construction: U1 = half-arc from position ``cut``, U2 = the rest.

    Part 1 is U1×U1 routed inside U1; part 2 is every other pair, routed
    inside U2 when both ends lie there and otherwise along the shorter arc
    (clockwise on ties).
    """
    m = C.m
    L = m if L is None else L
    order = C.ordering
    pos = C.position()
    half = (m + 1) // 2
    u1 = {order[(cut + i) % m] for i in range(half)}
    rel = {v: (pos[v] - cut) % m for v in order}
    parts = [set(), set()]
    secs = [{}, {}]
    for a in order:
        for b in order:
            ra, rb = rel[a], rel[b]
            if a in u1 and b in u1:
                j, delta = 0, rb - ra
            elif a not in u1 and b not in u1:
                j, delta = 1, rb - ra
            else:
                d = (pos[b] - pos[a]) % m
                j, delta = 1, (d if d <= m - d else d - m)
            parts[j].add((a, b))
            secs[j][(a, b)] = _cyc_steps(order, pos[a], delta, L)
    return MotionPlanner(C.image, [frozenset(p) for p in parts], secs, L, meta={"construction": "arc-split", "cut": cut})


def contraction_planner(X: DigitalImage, H: Homotopy) -> MotionPlanner:
    """One-part planner from a contraction H: id_X -> const: go down H from a, back up H to b."""
    T = H.steps
    cols = [s.table for s in H.stages]
    L = 2 * T
    sec = {}
    N = len(X)
    for a in range(N):
        down = [cols[t][a] for t in range(T + 1)]
        for b in range(N):
            up = [cols[t][b] for t in range(T - 1, -1, -1)]
            sec[(a, b)] = tuple(down + up)
    part = frozenset(sec)
    return MotionPlanner(X, [part], [sec], L, meta={"construction": "contraction", "steps": T})


def geodesic_planner(C: CurveWitness, L: Optional[int] = None) -> MotionPlanner:
    """One part, every pair routed along a shortest arc (clockwise on ties)."""
    m = C.m
    L = m if L is None else L
    pos = C.position()
    sec = {}
    for a in C.ordering:
        for b in C.ordering:
            d = (pos[b] - pos[a]) % m
            sec[(a, b)] = _cyc_steps(C.ordering, pos[a], d if d <= m - d else d - m, L)
    return MotionPlanner(C.image, [frozenset(sec)], [sec], L, meta={"construction": "geodesic"})


def synthesize_cycle_planner(C: CurveWitness) -> MotionPlanner:
    if not C.check():
        raise InputError("not a simple closed curve witness")
    m = C.m
    X = C.image
    tried = []
    if m < 5:
        plan = geodesic_planner(C)
        rep = verify_planner(X, plan)
        tried.append(("geodesic", rep.ok))
        if rep.ok:
            plan.meta["tried"] = tried
            return plan
        c = is_contractible(X)
        if c.yes and c.certificate is not None:
            plan = contraction_planner(X, c.certificate)
            rep = verify_planner(X, plan)
            tried.append(("contraction", rep.ok))
            if rep.ok:
                plan.meta["tried"] = tried
                return plan
        raise SynthesisError(f"no verified one-part planner for C_{m}: {tried}")
    if m == 5:
        raise InputError("no simple closed curve has 5 points")
    for cut in range(m):
        plan = arc_split_planner(C, cut)
        rep = verify_planner(X, plan)
        tried.append((f"arc-split@{cut}", rep.ok))
        if rep.ok:
            plan.meta["tried"] = tried
            return plan
    plan = band_planner(C)
    rep = verify_planner(X, plan)
    tried.append(("distance-band", rep.ok))
    if not rep.ok:
        raise SynthesisError(f"no verified two-part planner for C_{m}: {tried}")
    plan.meta["tried"] = tried
    return plan


def transport_planner(X: DigitalImage, equiv, plan_c: MotionPlanner) -> MotionPlanner:
    """Pull a planner on C back to X along an equivalence X ≃ C.

    Path for (a, b): follow h1 backwards from a to g f(a), then the image under g
    of the C-path for (f a, f b), then h1 forwards from g f(b) to b.
    """
    f, g, h1 = equiv.forward, equiv.backward, equiv.h1
    cols = [s.table for s in h1.stages]  # from g∘f to id
    T = h1.steps
    Lc = plan_c.length
    n = plan_c.n
    N = len(X)
    parts = [set() for _ in plan_c.parts]
    secs = [{} for _ in plan_c.parts]
    for tup in itertools.product(range(N), repeat=n):
        image_tup = tuple(f.table[v] for v in tup)
        for j, part in enumerate(plan_c.parts):
            if image_tup in part:
                break
        else:
            raise SynthesisError("source planner does not cover the image tuple")
        cpath = plan_c.sections[j][image_tup]
        a, b = tup[0], tup[-1]
        head = [cols[t][a] for t in range(T, -1, -1)]
        mid = [g.table[v] for v in cpath]
        tail = [cols[t][b] for t in range(T + 1)]
        parts[j].add(tup)
        secs[j][tup] = tuple(head + mid[1:] + tail[1:])
    L = 2 * T + Lc
    return MotionPlanner(X, [frozenset(p) for p in parts], secs, L, n,
                         meta={"construction": "transported", "via": plan_c.meta.get("construction")})


# ---------------------------------------------------------------------------
# classification

@dataclass
class TCResult:
    value: Optional[int]
    method: str  # "rule", "certificate" or "oracle"
    witness: Optional[MotionPlanner] = None
    lower_bound_evidence: object = None
    notes: dict = field(default_factory=dict)


def _require_connected(X, what):
    if not is_connected(X):
        raise InputError(f"{what}: image is not connected")


def cycle_threshold(kind) -> int:
    """Smallest m for which a non-contractible simple closed curve exists."""
    return 8 if kind.k == 1 and kind.dim == 2 else 6


def tc_classify(X: DigitalImage, budget: int = DEFAULT_BUDGET) -> TCResult:
    _require_connected(X, "tc_classify")
    if X.dim >= 3:
        raise InputError("TC classification covers images in Z and Z^2 only")
    c = is_contractible(X, budget)
    if X.dim == 1 or c.yes:
        if c.yes and c.certificate is not None:
            plan = contraction_planner(X, c.certificate)
            rep = verify_planner(X, plan)
            if rep.ok:
                method = "rule" if X.dim == 1 else "certificate"
                return TCResult(1, method, plan, None, {"contractible": c.method, "rule": "dimension 1" if X.dim == 1 else None})
        return TCResult(1, "rule", None, None, {"contractible": c.verdict.value})
    if c.unknown:
        return TCResult(None, "rule", None, c, {"reason": "contractibility undecided within budget"})
    ce = cycle_equivalence(X, budget)
    if ce is not None:
        m, equiv = ce
        C = detect_simple_closed_curve(equiv.forward.target)
        plan_c = synthesize_cycle_planner(C)
        plan = plan_c if equiv.forward.target == X else transport_planner(X, equiv, plan_c)
        rep = verify_planner(X, plan)
        if not rep.ok:
            raise SynthesisError(f"transported planner failed verification: {rep.summary(X)}")
        return TCResult(2, "certificate", plan, c, {"cycle_m": m})
    return TCResult(1, "rule", None, c, {
        "consult_oracle": True,
        "reason": "not contractible and not equivalent to a simple closed curve; value from the cycle rule",
    })


# ---------------------------------------------------------------------------
# oracle

def walks(X: DigitalImage, L: int, cap: int) -> dict:
    """All walks of exactly L steps in the reflexive graph, grouped by (start, end)."""
    N = len(X)
    closed = [X.closed_nbrs(v) for v in range(N)]
    layer = [[(a,)] for a in range(N)]
    total = N
    for _ in range(L):
        nxt = []
        for a in range(N):
            out = []
            for w in layer[a]:
                for v in closed[w[-1]]:
                    out.append(w + (v,))
            nxt.append(out)
            total += len(out)
            if total > cap:
                return None
        layer = nxt
    by_pair = {(a, b): [] for a in range(N) for b in range(N)}
    for a in range(N):
        for w in layer[a]:
            by_pair.setdefault((a, w[-1]), []).append(w)
    # prefer walks that settle at their endpoint early, then lexicographic
    for key, ws in by_pair.items():
        ws.sort(key=lambda w: (_arrival(w), w))
    return by_pair


def _arrival(w):
    t = len(w) - 1
    while t > 0 and w[t - 1] == w[-1]:
        t -= 1
    return t


class _CSP:
    """Variables get a (part, value); neighbouring variables in the same part need adjacent values.

    Values are step sequences over a graph with reflexive adjacency matrix
    ``eqadj``; two values are compatible when pointwise equal or adjacent.
    """

    def __init__(self, domains: dict, nbrs: dict, eqadj, parts: int, budget: int):
        self.vars = sorted(domains)
        self.vidx = {v: i for i, v in enumerate(self.vars)}
        self.dom = [np.asarray(domains[v], dtype=np.int64).reshape(len(domains[v]), -1) for v in self.vars]
        self.parts = parts
        self.budget = budget
        self.nodes = 0
        self.nbrs = [[self.vidx[u] for u in nbrs[v] if u in self.vidx and u != v] for v in self.vars]
        self.eq = eqadj
        self.compat = {}

    @classmethod
    def over_tuples(cls, X, domains, parts, budget):
        nbrs = {v: list(product_neighbors(X, v)) for v in domains}
        return cls(domains, nbrs, X.eqadj, parts, budget)

    def _compatible(self, i, pi, k):
        key = (i, pi, k)
        got = self.compat.get(key)
        if got is None:
            got = _kernels.compatible_mask(self.dom[i][pi], self.dom[k], self.eq)
            self.compat[key] = got
        return got

    def solve(self):
        nv = len(self.vars)
        masks = [np.ones((self.parts, len(d)), dtype=bool) for d in self.dom]
        assign = [None] * nv
        status = self._search(masks, assign, 0)
        return status, assign

    def _search(self, masks, assign, depth):
        nv = len(self.vars)
        if depth == nv:
            return "sat"
        # minimum remaining values, ties broken towards already-constrained variables
        best, best_count = None, None
        for i in range(nv):
            if assign[i] is None:
                c = int(masks[i].sum())
                if best is None or c < best_count:
                    best, best_count = i, c
                    if c <= 1:
                        break
        if best_count == 0:
            return "unsat"
        i = best
        used_parts = {a[0] for a in assign if a is not None}
        for part in range(self.parts):
            # parts are interchangeable: never open part p+1 before part p is in use
            if part > 0 and (part - 1) not in used_parts and part not in used_parts:
                break
            for pi in np.nonzero(masks[i][part])[0]:
                self.nodes += 1
                if self.nodes > self.budget:
                    return "budget"
                saved = []
                ok = True
                for k in self.nbrs[i]:
                    if assign[k] is not None:
                        continue
                    comp = self._compatible(i, int(pi), k)
                    row = masks[k][part]
                    new = row & comp
                    if not new.all() or not row.all():
                        saved.append((k, row.copy()))
                        masks[k][part] = new
                    if not masks[k].any():
                        ok = False
                        break
                if ok:
                    assign[i] = (part, int(pi))
                    status = self._search(masks, assign, depth + 1)
                    if status in ("sat", "budget"):
                        return status
                    assign[i] = None
                for k, row in saved:
                    masks[k][part] = row
        return "unsat"

    def planner(self, X, assign, L, meta):
        parts = [set() for _ in range(self.parts)]
        secs = [{} for _ in range(self.parts)]
        for v, (part, pi) in zip(self.vars, assign):
            parts[part].add(v)
            secs[part][v] = tuple(int(x) for x in self.dom[self.vidx[v]][pi])
        keep = [j for j in range(self.parts) if parts[j]]
        return MotionPlanner(X, [frozenset(parts[j]) for j in keep], [secs[j] for j in keep], L, meta=meta)


def section_search(X: DigitalImage, parts: int, L: int, budget: int, domain_cap: int = 2_000_000):
    """CSP for a cover of X×X by ``parts`` parts with continuous sections at length L.

    Returns (status, planner, nodes) with status "sat", "unsat", "budget" or "domain-cap".
    """
    ws = walks(X, L, domain_cap)
    if ws is None:
        return "domain-cap", None, 0
    csp = _CSP.over_tuples(X, ws, parts, budget)
    status, assign = csp.solve()
    if status != "sat":
        return status, None, csp.nodes
    return "sat", csp.planner(X, assign, L, {"construction": "csp", "parts": parts, "nodes": csp.nodes}), csp.nodes


def tc_oracle(X: DigitalImage, L_max: Optional[int] = None, budget: int = DEFAULT_CSP_BUDGET,
              map_budget: int = DEFAULT_BUDGET) -> TCResult:
    """Brute-force TC for small images, independent of the rule-based classifier."""
    _require_connected(X, "tc_oracle")
    N = len(X)
    L_max = 4 * N if L_max is None else L_max
    diam = int(X.distances().max())
    log = []
    spent = 0
    L0 = max(diam, 1) if N > 1 else 0

    def deepen(parts):
        nonlocal spent
        for L in range(L0, L_max + 1):
            status, plan, nodes = section_search(X, parts, L, max(budget - spent, 1))
            spent += nodes
            log.append((parts, L, status))
            if status == "sat":
                rep = verify_planner(X, plan)
                if not rep.ok:
                    raise SynthesisError(f"oracle produced an unverifiable {parts}-part planner")
                return plan
            if status != "unsat":
                return None
        return None

    plan = deepen(1)
    if plan is not None:
        return TCResult(1, "oracle", plan, None, {"log": log, "nodes": spent})
    contractible = is_contractible(X, map_budget)
    if not contractible.no:
        return TCResult(None, "oracle", None, contractible, {"log": log, "nodes": spent, "reason": "no global section found"})
    spent = 0
    plan = deepen(2)
    if plan is not None:
        return TCResult(2, "oracle", plan, contractible, {"log": log, "nodes": spent})
    return TCResult(None, "oracle", None, contractible, {"log": log, "nodes": spent, "reason": "no two-part cover found"})


# ---------------------------------------------------------------------------
# planner text format

def _pt(p):
    return " ".join(str(c) for c in p)


def serialize_planner(plan: MotionPlanner) -> str:
    X = plan.image
    lines = [f"parts {plan.k}", f"length {plan.length}"]
    if plan.n != 2:
        lines.append(f"n {plan.n}")
    for j, sec in enumerate(plan.sections):
        for tup in sorted(sec):
            head = " ".join(_pt(X.points[v]) for v in tup)
            body = " ".join(_pt(X.points[v]) for v in sec[tup])
            lines.append(f"s {j} {head} : {body}")
    return "\n".join(lines) + "\n"


def parse_planner(text: str, X: DigitalImage, source: Optional[str] = None) -> MotionPlanner:
    d = X.dim
    k = L = None
    n = 2
    parts, secs = None, None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        try:
            if head == "parts":
                k = int(rest[0])
            elif head == "length":
                L = int(rest[0])
            elif head == "n":
                n = int(rest[0])
            elif head == "s":
                if k is None or L is None:
                    raise ParseError("section lines must follow 'parts' and 'length'", lineno, source)
                if parts is None:
                    parts, secs = [set() for _ in range(k)], [{} for _ in range(k)]
                if ":" not in rest:
                    raise ParseError("missing ':' between tuple and path", lineno, source)
                cut = rest.index(":")
                j = int(rest[0])
                if not 0 <= j < k:
                    raise ParseError(f"part index {j} out of range", lineno, source)
                tup_vals = [int(c) for c in rest[1:cut]]
                path_vals = [int(c) for c in rest[cut + 1:]]
                if len(tup_vals) != n * d or not path_vals or len(path_vals) % d:
                    raise ParseError("wrong number of coordinates", lineno, source)
                tup = tuple(_lookup(X, tup_vals[i:i + d], lineno, source) for i in range(0, len(tup_vals), d))
                steps = tuple(_lookup(X, path_vals[i:i + d], lineno, source) for i in range(0, len(path_vals), d))
                parts[j].add(tup)
                secs[j][tup] = normalize(steps, L)
            else:
                raise ParseError(f"unrecognised directive {head!r}", lineno, source)
        except (ValueError, IndexError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"malformed line {raw.strip()!r}", lineno, source) from None
        except InputError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(str(exc), lineno, source) from None
    if k is None or L is None:
        raise ParseError("missing 'parts' or 'length' header", None, source)
    if parts is None:
        parts, secs = [set() for _ in range(k)], [{} for _ in range(k)]
    return MotionPlanner(X, [frozenset(p) for p in parts], secs, L, n)


def _lookup(X, coords, lineno, source):
    p = tuple(coords)
    if p not in X.index:
        raise ParseError(f"point {p} is not in the image", lineno, source)
    return X.index[p]
