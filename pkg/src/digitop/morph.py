"""Digital maps, the homotopy engine, and the classifiers built on it.

Homotopy of maps X -> Y is reachability in the *map graph*: vertices are the
continuous maps, and two maps are joined when they agree or are adjacent at
every point (a one-step homotopy).  Maps are stored as tuples of target
indices in the source's canonical point order, which doubles as the hash key
for visited sets.

Every "yes" comes with a certificate that re-verifies independently of the
search that produced it; "no" comes only from an exhausted search.
"""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

import numpy as np

from . import _kernels
from .errors import InputError, ResourceLimitError
from .lattice import DigitalImage, components, detect_simple_closed_curve, generate_cycle, is_connected

DEFAULT_BUDGET = 5_000_000


class Verdict(str, enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass
class TriState:
    verdict: Verdict
    certificate: object = None
    method: str = ""
    info: dict = field(default_factory=dict)

    @property
    def yes(self):
        return self.verdict is Verdict.YES

    @property
    def no(self):
        return self.verdict is Verdict.NO

    @property
    def unknown(self):
        return self.verdict is Verdict.UNKNOWN

    def __bool__(self):
        raise TypeError("TriState has three values; test .yes / .no / .unknown")


class DigitalMap:
    """A point assignment ``source -> target`` stored as a tuple of target indices."""

    __slots__ = ("source", "target", "table")

    def __init__(self, source, target, table):
        table = tuple(int(v) for v in table)
        if len(table) != len(source):
            raise InputError(f"map table has {len(table)} entries for {len(source)} source points")
        n = len(target)
        if any(v < 0 or v >= n for v in table):
            raise InputError("map value outside the target image")
        self.source = source
        self.target = target
        self.table = table

    @classmethod
    def from_points(cls, source: DigitalImage, target: DigitalImage, mapping) -> "DigitalMap":
        mapping = {tuple(k): tuple(v) for k, v in dict(mapping).items()}
        try:
            return cls(source, target, [target.index[mapping[p]] for p in source.points])
        except KeyError as exc:
            raise InputError(f"map is not total or leaves the target: {exc}") from None

    @classmethod
    def identity(cls, X) -> "DigitalMap":
        return cls(X, X, range(len(X)))

    @classmethod
    def constant(cls, X, Y, value: int) -> "DigitalMap":
        return cls(X, Y, [value] * len(X))

    @classmethod
    def inclusion(cls, sub: DigitalImage, X: DigitalImage) -> "DigitalMap":
        return cls(sub, X, [X.index[p] for p in sub.points])

    def __call__(self, p):
        return self.target.points[self.table[self.source.index[tuple(p)]]]

    def __eq__(self, other):
        return (
            isinstance(other, DigitalMap)
            and self.table == other.table
            and self.source == other.source
            and self.target == other.target
        )

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        return f"DigitalMap({self.table})"

    def compose(self, inner: "DigitalMap") -> "DigitalMap":
        """``self ∘ inner``."""
        if inner.target != self.source:
            raise InputError("composition: inner target differs from outer source")
        t = self.table
        return DigitalMap(inner.source, self.target, [t[v] for v in inner.table])

    def image(self) -> set:
        return set(self.table)

    def is_surjective(self) -> bool:
        return len(set(self.table)) == len(self.target)

    def corestrict(self, sub: DigitalImage) -> "DigitalMap":
        """The same map with target shrunk to ``sub`` (must contain the image)."""
        pts = self.target.points
        return DigitalMap(self.source, sub, [sub.index[pts[v]] for v in self.table])


def _edges(G) -> list:
    return [(i, j) for i in range(len(G)) for j in G.nbrs[i] if j < i]


def _back(G) -> list:
    return [[j for j in G.nbrs[i] if j < i] for i in range(len(G))]


def is_continuous(f: DigitalMap) -> bool:
    return _kernels.is_continuous(f.table, _edges(f.source), f.target.eqadj)


def one_step(f_table, g_table, target) -> bool:
    eq = target.eqadj
    return all(eq[a, b] for a, b in zip(f_table, g_table))


class Homotopy:
    """A sequence of maps; each stage continuous, consecutive stages pointwise equal-or-adjacent."""

    def __init__(self, stages):
        stages = list(stages)
        if not stages:
            raise InputError("a homotopy needs at least one stage")
        self.stages = stages

    @property
    def source(self):
        return self.stages[0].source

    @property
    def target(self):
        return self.stages[0].target

    @property
    def start(self) -> DigitalMap:
        return self.stages[0]

    @property
    def end(self) -> DigitalMap:
        return self.stages[-1]

    @property
    def steps(self) -> int:
        return len(self.stages) - 1

    def __len__(self):
        return len(self.stages)

    def reversed(self) -> "Homotopy":
        return Homotopy(self.stages[::-1])

    def then(self, other: "Homotopy") -> "Homotopy":
        if self.end.table != other.start.table:
            raise InputError("cannot concatenate homotopies with mismatched ends")
        return Homotopy(self.stages + other.stages[1:])

    def whisker(self, pre: Optional[DigitalMap] = None, post: Optional[DigitalMap] = None) -> "Homotopy":
        """Stages ``post ∘ H_t ∘ pre``."""
        out = []
        for s in self.stages:
            if pre is not None:
                s = s.compose(pre)
            if post is not None:
                s = post.compose(s)
            out.append(s)
        return Homotopy(out)

    def check(self) -> bool:
        src, tgt = self.source, self.target
        for s in self.stages:
            if s.source != src or s.target != tgt or not is_continuous(s):
                return False
        return all(one_step(a.table, b.table, tgt) for a, b in zip(self.stages, self.stages[1:]))

    def __repr__(self):
        return f"Homotopy({self.steps} steps)"


@dataclass
class EquivalenceCertificate:
    """forward: X -> Y, backward: Y -> X; h1: backward∘forward ≃ id_X; h2: forward∘backward ≃ id_Y."""

    forward: DigitalMap
    backward: DigitalMap
    h1: Homotopy
    h2: Homotopy

    def check(self) -> bool:
        f, g = self.forward, self.backward
        if f.target != g.source or g.target != f.source:
            return False
        if not (is_continuous(f) and is_continuous(g)):
            return False
        X, Y = f.source, f.target
        gf, fg = g.compose(f), f.compose(g)
        return (
            self.h1.check()
            and self.h2.check()
            and self.h1.start.table == gf.table
            and self.h1.end.table == tuple(range(len(X)))
            and self.h2.start.table == fg.table
            and self.h2.end.table == tuple(range(len(Y)))
        )

    def inverse(self) -> "EquivalenceCertificate":
        return EquivalenceCertificate(self.backward, self.forward, self.h2, self.h1)

    def then(self, other: "EquivalenceCertificate") -> "EquivalenceCertificate":
        """Compose X ≃ Y (self) with Y ≃ Z (other) into X ≃ Z."""
        fa, ga, fb, gb = self.forward, self.backward, other.forward, other.backward
        F, G = fb.compose(fa), ga.compose(gb)
        h1 = other.h1.whisker(pre=fa, post=ga).then(self.h1)
        h2 = self.h2.whisker(pre=gb, post=fb).then(other.h2)
        return EquivalenceCertificate(F, G, h1, h2)

    @classmethod
    def isomorphism(cls, f: DigitalMap, finv: DigitalMap) -> "EquivalenceCertificate":
        return cls(
            f,
            finv,
            Homotopy([DigitalMap.identity(f.source)]),
            Homotopy([DigitalMap.identity(f.target)]),
        )


# ---------------------------------------------------------------------------
# map graph search

def one_step_neighbors(table, source, target, cap: int = 10_000_000) -> list:
    """All continuous maps agreeing with or adjacent to ``table`` at every point."""
    domains = [target.closed_nbrs(v) if hasattr(target, "closed_nbrs") else _closed(target, v) for v in table]
    out = _kernels.enumerate_assignments(domains, _back(source), target.eqadj, cap)
    if len(out) > cap:
        raise ResourceLimitError(f"more than {cap} one-step neighbours", partial=cap)
    return out


def _closed(G, v):
    return tuple(sorted((v,) + tuple(G.nbrs[v])))


def continuous_maps(source, target, cap: int = 1_000_000) -> list:
    """Every continuous map source -> target, as tables in lexicographic order."""
    domains = [tuple(range(len(target)))] * len(source)
    out = _kernels.enumerate_assignments(domains, _back(source), target.eqadj, cap)
    if len(out) > cap:
        raise ResourceLimitError(f"more than {cap} continuous maps", partial=cap)
    return out


@dataclass
class SearchResult:
    status: str  # "found", "exhausted" or "budget"
    goal: Optional[tuple]
    parents: dict
    visited: int

    def path_to(self, table) -> list:
        out = [table]
        while self.parents[out[-1]] is not None:
            out.append(self.parents[out[-1]])
        return out[::-1]


def bfs_maps(start, source, target, goal: Optional[Callable[[tuple], bool]] = None,
             budget: int = DEFAULT_BUDGET) -> SearchResult:
    """Breadth-first search of the map graph from ``start``.

    Stops at the first map satisfying ``goal``; otherwise explores the whole
    component.  ``budget`` caps the number of visited maps.
    """
    start = tuple(start)
    parents = {start: None}
    if goal is not None and goal(start):
        return SearchResult("found", start, parents, 1)
    queue = deque([start])
    back = _back(source)
    eq = target.eqadj
    closed = [_closed(target, v) for v in range(len(target))]
    while queue:
        cur = queue.popleft()
        domains = [closed[v] for v in cur]
        for nxt in _kernels.enumerate_assignments(domains, back, eq, budget):
            if nxt in parents:
                continue
            parents[nxt] = cur
            if goal is not None and goal(nxt):
                return SearchResult("found", nxt, parents, len(parents))
            if len(parents) >= budget:
                return SearchResult("budget", None, parents, len(parents))
            queue.append(nxt)
    return SearchResult("exhausted", None, parents, len(parents))


def _homotopy_from_tables(tables, source, target) -> Homotopy:
    return Homotopy([DigitalMap(source, target, t) for t in tables])


def homotopic(f: DigitalMap, g: DigitalMap, budget: int = DEFAULT_BUDGET) -> TriState:
    if f.source != g.source or f.target != g.target:
        raise InputError("homotopic: maps must share source and target")
    for h in (f, g):
        if not is_continuous(h):
            raise InputError("homotopic: maps must be continuous")
    goal_table = g.table
    res = bfs_maps(f.table, f.source, f.target, goal=lambda t: t == goal_table, budget=budget)
    info = {"visited": res.visited}
    if res.status == "found":
        H = _homotopy_from_tables(res.path_to(res.goal), f.source, f.target)
        return TriState(Verdict.YES, H, "certificate", info)
    if res.status == "exhausted":
        return TriState(Verdict.NO, None, "exhaustive", info)
    return TriState(Verdict.UNKNOWN, None, "budget", info)


# ---------------------------------------------------------------------------
# reduction chains

def find_one_step_shrink(Y: DigitalImage) -> Optional[tuple]:
    """A continuous non-surjective map Y -> Y that is one step from the identity, or None."""
    n = len(Y)
    if n <= 1:
        return None
    back = _back(Y)
    closed = [Y.closed_nbrs(v) for v in range(n)]
    # omit points in order of increasing degree: low-degree points fold away most often
    for z in sorted(range(n), key=lambda v: (len(Y.nbrs[v]), v)):
        domains = [tuple(u for u in closed[v] if u != z) for v in range(n)]
        if not domains[z]:
            continue
        hit = _kernels.enumerate_assignments(domains, back, Y.eqadj, 0)
        if hit:
            return hit[0]
    return None


@dataclass
class Reduction:
    """A chain X = Y_0 ⊋ Y_1 ⊋ ... ⊋ Y_k with certified equivalences X ≃ Y_k.

    ``stages`` is a homotopy from id_X to the retraction X -> Y_k (as a self-map
    of X); ``equivalence`` certifies X ≃ core.
    """

    image: DigitalImage
    core: DigitalImage
    stages: Homotopy
    equivalence: EquivalenceCertificate


def reduce_image(X: DigitalImage, max_steps: Optional[int] = None) -> Reduction:
    """Greedily apply one-step shrinking maps until none exists."""
    ident = DigitalMap.identity(X)
    tables = [ident.table]
    equiv = EquivalenceCertificate.isomorphism(ident, ident)
    Y = X
    steps = 0
    while max_steps is None or steps < max_steps:
        g = find_one_step_shrink(Y)
        if g is None:
            break
        Z = Y.subimage(g)
        g_map = DigitalMap(Y, Y, g)
        forward = g_map.corestrict(Z)
        incl = DigitalMap.inclusion(Z, Y)
        h1 = Homotopy([incl.compose(forward), DigitalMap.identity(Y)])
        h2 = Homotopy([forward.compose(incl), DigitalMap.identity(Z)])
        equiv = equiv.then(EquivalenceCertificate(forward, incl, h1, h2))
        # track the composite retraction as a self-map of X
        to_x = [X.index[Y.points[v]] for v in g]
        prev = tables[-1]
        tables.append(tuple(to_x[Y.index[X.points[v]]] for v in prev))
        Y = Z
        steps += 1
    return Reduction(X, Y, _homotopy_from_tables(tables, X, X), equiv)


def _require_connected(X: DigitalImage, what: str):
    if not is_connected(X):
        raise InputError(f"{what}: image is not connected")


def _cycle_retraction(Y: DigitalImage, budget: int) -> Optional[dict]:
    """An induced non-contractible cycle A of Y with a retraction Y -> A, or None.

    A contraction H of Y would give the contraction r∘H∘ι of A, so such a
    pair proves Y non-contractible.
    """
    from .loops import iter_simple_loops

    back = _back(Y)
    for tried, cyc in enumerate(iter_simple_loops(Y, 4)):
        if tried >= 64 or len(cyc) == len(Y):
            break
        A = Y.subimage(cyc)
        if find_one_step_shrink(A) is not None:
            continue
        home = {v: A.index[Y.points[v]] for v in cyc}
        domains = [(home[v],) if v in home else tuple(range(len(A))) for v in range(len(Y))]
        hit = _kernels.enumerate_assignments(domains, back, A.eqadj, 0)
        if not hit:
            continue
        res = bfs_maps(tuple(range(len(A))), A, A, goal=lambda t: len(set(t)) == 1, budget=budget)
        if res.status == "exhausted":
            return {"cycle": A, "retraction": DigitalMap(Y, A, hit[0]), "component": res.visited}
    return None


def is_contractible(X: DigitalImage, budget: int = DEFAULT_BUDGET) -> TriState:
    """Certificate: a Homotopy from id_X to a constant map.

    The search runs on the reduction core; a contraction of the core lifts to X
    through the reduction homotopy.
    """
    _require_connected(X, "is_contractible")
    red = reduce_image(X)
    core = red.core
    if len(core) == 1:
        return TriState(Verdict.YES, red.stages, "certificate", {"route": "reduction", "steps": red.stages.steps})
    info = {"core_size": len(core)}
    ret = _cycle_retraction(core, budget)
    if ret is not None:
        info.update(route="retraction", cycle_size=len(ret["cycle"]), cycle_component=ret["component"])
        return TriState(Verdict.NO, ret, "retraction", info)
    res = bfs_maps(tuple(range(len(core))), core, core, goal=lambda t: len(set(t)) == 1, budget=budget)
    info.update(route="search", visited=res.visited)
    if res.status == "found":
        Hc = _homotopy_from_tables(res.path_to(res.goal), core, core)
        eq = red.equivalence
        H = red.stages.then(Hc.whisker(pre=eq.forward, post=eq.backward))
        return TriState(Verdict.YES, H, "certificate", info)
    if res.status == "exhausted":
        return TriState(Verdict.NO, None, "exhaustive", info)
    # budget hit: the small-image rules still decide some cases
    from .loops import find_simple_loop

    if len(X) <= 4:
        return TriState(Verdict.YES, None, "rule", dict(info, rule="connected with at most 4 points"))
    if find_simple_loop(X) is None:
        return TriState(Verdict.YES, None, "rule", dict(info, rule="no simple m-loop with m >= 4"))
    return TriState(Verdict.UNKNOWN, None, "budget", info)


@dataclass
class ReducibilityCertificate:
    homotopy: Homotopy  # id_X -> non-surjective f
    smaller: DigitalImage  # f(X)
    equivalence: EquivalenceCertificate  # X ≃ f(X)


def _subimage_equivalence(X: DigitalImage, H: Homotopy, budget: int) -> Optional[EquivalenceCertificate]:
    """Given H: id_X ≃ f, certify X ≃ f(X) or return None."""
    f = H.end
    Z = X.subimage(f.table)
    forward = f.corestrict(Z)
    incl = DigitalMap.inclusion(Z, X)
    h1 = H.reversed()
    back = forward.compose(incl)
    ident = DigitalMap.identity(Z)
    if one_step(back.table, ident.table, Z) and is_continuous(back):
        h2 = Homotopy([back, ident]) if back.table != ident.table else Homotopy([ident])
    else:
        r = homotopic(back, ident, budget)
        if not r.yes:
            return None
        h2 = r.certificate
    cert = EquivalenceCertificate(forward, incl, h1, h2)
    return cert if cert.check() else None


def is_reducible(X: DigitalImage, budget: int = DEFAULT_BUDGET) -> TriState:
    _require_connected(X, "is_reducible")
    n = len(X)
    if n == 1:
        return TriState(Verdict.NO, None, "rule", {"rule": "one-point image"})
    ident = DigitalMap.identity(X)
    g = find_one_step_shrink(X)
    if g is not None:
        H = Homotopy([ident, DigitalMap(X, X, g)])
        eq = _subimage_equivalence(X, H, budget)
        if eq is not None:
            return TriState(Verdict.YES, ReducibilityCertificate(H, eq.forward.target, eq), "certificate",
                            {"route": "one-step"})
    rejected = set()

    def goal(t):
        return len(set(t)) < n and t not in rejected

    start = ident.table
    visited = 0
    while True:
        res = bfs_maps(start, X, X, goal=goal, budget=budget)
        visited = res.visited
        if res.status != "found":
            break
        H = _homotopy_from_tables(res.path_to(res.goal), X, X)
        eq = _subimage_equivalence(X, H, budget)
        if eq is not None:
            return TriState(Verdict.YES, ReducibilityCertificate(H, eq.forward.target, eq), "certificate",
                            {"route": "search", "visited": visited})
        rejected.add(res.goal)
    info = {"visited": visited, "unconfirmed": len(rejected)}
    if res.status == "exhausted" and not rejected:
        return TriState(Verdict.NO, None, "exhaustive", info)
    return TriState(Verdict.UNKNOWN, None, "budget", info)


def is_rigid(X: DigitalImage, budget: int = DEFAULT_BUDGET) -> TriState:
    """Rigid iff the identity has no one-step neighbour besides itself."""
    _require_connected(X, "is_rigid")
    ident = tuple(range(len(X)))
    nbrs = [t for t in one_step_neighbors(ident, X, X, cap=budget) if t != ident]
    if not nbrs:
        return TriState(Verdict.YES, None, "exhaustive", {"neighbours": 0})
    # prefer an automorphism (e.g. a rotation) as the witness
    bij = [t for t in nbrs if len(set(t)) == len(X)]
    pick = (bij or nbrs)[0]
    H = _homotopy_from_tables([ident, pick], X, X)
    return TriState(Verdict.NO, H, "certificate", {"neighbours": len(nbrs)})


# ---------------------------------------------------------------------------
# homotopy equivalence

def find_isomorphism(X: DigitalImage, Y: DigitalImage) -> Optional[tuple]:
    """Adjacency-preserving bijection X -> Y (both directions), or None."""
    n = len(X)
    if n != len(Y):
        return None
    if sorted(len(a) for a in X.nbrs) != sorted(len(b) for b in Y.nbrs):
        return None
    if X.points == Y.points and X.kind == Y.kind:
        return tuple(range(n))
    # translation shortcut
    if X.kind == Y.kind:
        off = tuple(b - a for a, b in zip(X.points[0], Y.points[0]))
        shifted = [tuple(a + o for a, o in zip(p, off)) for p in X.points]
        if tuple(shifted) == Y.points:
            return tuple(range(n))
    order = sorted(range(n), key=lambda v: (-len(X.nbrs[v]), v))
    # reorder so each vertex after the first has an earlier neighbour when possible
    seq, seen = [], set()
    for s in order:
        if s in seen:
            continue
        queue = deque([s])
        seen.add(s)
        while queue:
            u = queue.popleft()
            seq.append(u)
            for v in X.nbrs[u]:
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
    assign = {}
    used = set()
    ydeg = [len(b) for b in Y.nbrs]

    def rec(k):
        if k == n:
            return True
        u = seq[k]
        for w in range(n):
            if w in used or ydeg[w] != len(X.nbrs[u]):
                continue
            ok = True
            for v, wv in assign.items():
                if X.is_adj(u, v) != Y.is_adj(w, wv):
                    ok = False
                    break
            if ok:
                assign[u] = w
                used.add(w)
                if rec(k + 1):
                    return True
                del assign[u]
                used.discard(w)
        return False

    if rec(0):
        return tuple(assign[u] for u in range(n))
    return None


def _iso_certificate(X, Y, table) -> EquivalenceCertificate:
    inv = [0] * len(table)
    for i, v in enumerate(table):
        inv[v] = i
    return EquivalenceCertificate.isomorphism(DigitalMap(X, Y, table), DigitalMap(Y, X, inv))


def _core_equivalence(Xc, Yc, budget) -> TriState:
    """Brute-force X' ≃ Y' on small cores via the identity components."""
    rx = bfs_maps(tuple(range(len(Xc))), Xc, Xc, budget=budget)
    ry = bfs_maps(tuple(range(len(Yc))), Yc, Yc, budget=budget)
    if rx.status == "budget" or ry.status == "budget":
        return TriState(Verdict.UNKNOWN, None, "budget", {"visited": rx.visited + ry.visited})
    try:
        fs = continuous_maps(Xc, Yc, cap=budget)
        gs = continuous_maps(Yc, Xc, cap=budget)
    except ResourceLimitError:
        return TriState(Verdict.UNKNOWN, None, "budget", {})
    info = {"maps_xy": len(fs), "maps_yx": len(gs), "component_x": rx.visited, "component_y": ry.visited}
    if len(fs) * len(gs) > budget:
        return TriState(Verdict.UNKNOWN, None, "budget", dict(info, reason="too many map pairs"))
    for f in fs:
        for g in gs:
            gf = tuple(g[v] for v in f)
            if gf not in rx.parents:
                continue
            fg = tuple(f[v] for v in g)
            if fg not in ry.parents:
                continue
            F, G = DigitalMap(Xc, Yc, f), DigitalMap(Yc, Xc, g)
            h1 = _homotopy_from_tables(rx.path_to(gf), Xc, Xc).reversed()
            h2 = _homotopy_from_tables(ry.path_to(fg), Yc, Yc).reversed()
            return TriState(Verdict.YES, EquivalenceCertificate(F, G, h1, h2), "certificate", info)
    return TriState(Verdict.NO, None, "exhaustive", info)


def homotopy_equivalent(X: DigitalImage, Y: DigitalImage, budget: int = DEFAULT_BUDGET) -> TriState:
    """Decide X ≃ Y; a yes carries an EquivalenceCertificate X -> Y."""
    _require_connected(X, "homotopy_equivalent")
    _require_connected(Y, "homotopy_equivalent")
    iso = find_isomorphism(X, Y)
    if iso is not None:
        return TriState(Verdict.YES, _iso_certificate(X, Y, iso), "certificate", {"route": "isomorphism"})
    rx, ry = reduce_image(X), reduce_image(Y)
    Xc, Yc = rx.core, ry.core
    iso = find_isomorphism(Xc, Yc)
    info = {"core_x": len(Xc), "core_y": len(Yc)}
    if iso is not None:
        cert = rx.equivalence.then(_iso_certificate(Xc, Yc, iso)).then(ry.equivalence.inverse())
        return TriState(Verdict.YES, cert, "certificate", dict(info, route="cores"))
    # invariants: contractibility
    cx, cy = is_contractible(Xc, budget), is_contractible(Yc, budget)
    if cx.yes and cy.yes:
        ex, ey = _contractible_to_point(Xc, cx), _contractible_to_point(Yc, cy)
        if ex is not None and ey is not None:
            pts = _iso_certificate(ex.forward.target, ey.forward.target, (0,))
            cert = rx.equivalence.then(ex).then(pts).then(ey.inverse()).then(ry.equivalence.inverse())
            return TriState(Verdict.YES, cert, "certificate", dict(info, route="contractible"))
    if (cx.yes and cy.no) or (cx.no and cy.yes):
        return TriState(Verdict.NO, None, "invariant", dict(info, invariant="contractibility"))
    from .loops import count_loop_classes

    # loop lengths worth comparing: short ones, plus cycle lengths that witness non-contractibility
    ms = {1, 2, 3, 4}
    for Z, c in ((Xc, cx), (Yc, cy)):
        w = detect_simple_closed_curve(Z)
        if w is not None:
            ms.add(w.m)
        if c.method == "retraction":
            ms.add(len(c.certificate["cycle"]))
    for m in sorted(ms):
        try:
            lx, ly = count_loop_classes(Xc, m, budget), count_loop_classes(Yc, m, budget)
        except ResourceLimitError:
            continue
        if lx.count is not None and ly.count is not None and lx.count != ly.count:
            return TriState(Verdict.NO, None, "invariant", dict(info, invariant=f"L_{m}", values=(lx.count, ly.count)))
    res = _core_equivalence(Xc, Yc, budget)
    res.info.update(info)
    if res.yes:
        res.certificate = rx.equivalence.then(res.certificate).then(ry.equivalence.inverse())
    return res


def _contractible_to_point(X, verdict: TriState) -> Optional[EquivalenceCertificate]:
    """X ≃ {x0} from a contraction homotopy id_X -> const."""
    H = verdict.certificate
    if H is None:
        return None
    x0 = H.end.table[0]
    P = DigitalImage([X.points[x0]], X.kind)
    forward = DigitalMap(X, P, [0] * len(X))
    backward = DigitalMap(P, X, [x0])
    h1 = H.reversed()
    h2 = Homotopy([DigitalMap.identity(P)])
    cert = EquivalenceCertificate(forward, backward, h1, h2)
    return cert if cert.check() else None


# ---------------------------------------------------------------------------
# 2D homotopy type

@dataclass
class HomotopyType:
    label: str  # "point", "cycle" or "other"
    m: Optional[int] = None
    certificate: object = None
    evidence: dict = field(default_factory=dict)

    def __str__(self):
        if self.label == "cycle":
            return f"CycleType({self.m})"
        return {"point": "PointType", "other": "OtherOrUnknown"}[self.label]


def cycle_equivalence(X: DigitalImage, budget: int = DEFAULT_BUDGET) -> Optional[tuple]:
    """(m, certificate X ≃ generated C_m) when X's reduction core is a simple closed curve."""
    red = reduce_image(X)
    w = detect_simple_closed_curve(red.core)
    if w is None or X.dim != 2:
        return None
    C = generate_cycle(w.m, X.kind)
    iso = find_isomorphism(red.core, C)
    if iso is None:
        return None
    return w.m, red.equivalence.then(_iso_certificate(red.core, C, iso))


def classify_homotopy_type_2d(X: DigitalImage, budget: int = DEFAULT_BUDGET) -> HomotopyType:
    if X.dim != 2:
        raise InputError("classify_homotopy_type_2d expects an image in Z^2")
    _require_connected(X, "classify_homotopy_type_2d")
    c = is_contractible(X, budget)
    evidence = {"contractible": c.verdict.value}
    if c.yes:
        return HomotopyType("point", certificate=c.certificate, evidence=evidence)
    ce = cycle_equivalence(X, budget)
    if ce is not None:
        return HomotopyType("cycle", ce[0], ce[1], evidence)
    tried = {}
    for m in range(4, len(X) + 1):
        try:
            C = generate_cycle(m, X.kind)
        except Exception:
            continue
        r = homotopy_equivalent(X, C, budget)
        tried[m] = r.verdict.value
        if r.yes:
            return HomotopyType("cycle", m, r.certificate, dict(evidence, tried=tried))
    evidence["tried"] = tried
    return HomotopyType("other", evidence=evidence)


# ---------------------------------------------------------------------------
# certificate text format

def _fmt_point(p) -> str:
    return ",".join(str(c) for c in p)


def serialize_homotopy(H: Homotopy) -> str:
    lines = [f"# homotopy: {H.steps} steps, {len(H.source)} source points"]
    pts = H.target.points
    for s in H.stages:
        lines.append(" ".join(_fmt_point(pts[v]) for v in s.table))
    return "\n".join(lines) + "\n"


def parse_homotopy(text: str, source: DigitalImage, target: DigitalImage) -> Homotopy:
    from .errors import ParseError

    stages = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        vals = line.split()
        if len(vals) != len(source):
            raise ParseError(f"stage has {len(vals)} values, expected {len(source)}", lineno)
        table = []
        for tok in vals:
            try:
                p = tuple(int(c) for c in tok.split(","))
            except ValueError:
                raise ParseError(f"bad point {tok!r}", lineno) from None
            if p not in target.index:
                raise ParseError(f"point {p} is not in the target image", lineno)
            table.append(target.index[p])
        stages.append(DigitalMap(source, target, table))
    if not stages:
        raise ParseError("certificate has no stages")
    return Homotopy(stages)
