"""m-loops, simple loops and the loop-class counts L_m."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ResourceLimitError
from .lattice import DigitalImage
from .morph import DEFAULT_BUDGET, DigitalMap, bfs_maps, continuous_maps, is_continuous


class CycleDomain:
    """The abstract m-cycle graph used as loop domain.

    For m <= 3 this is the degenerate cycle (one point, an edge, a triangle),
    which has no lattice realisation as a simple closed curve.
    """

    def __init__(self, m: int):
        if m < 1:
            raise ValueError("loop length must be positive")
        self.m = m
        if m == 1:
            nbrs = [()]
        elif m == 2:
            nbrs = [(1,), (0,)]
        else:
            nbrs = [tuple(sorted({(i - 1) % m, (i + 1) % m})) for i in range(m)]
        self.nbrs = tuple(nbrs)
        eq = np.eye(m, dtype=np.uint8)
        for i, row in enumerate(self.nbrs):
            eq[i, list(row)] = 1
        self.eqadj = eq
        self.points = tuple((i,) for i in range(m))
        self.index = {p: i for i, p in enumerate(self.points)}

    def __len__(self):
        return self.m

    def closed_nbrs(self, i):
        return tuple(sorted((i,) + self.nbrs[i]))

    def __eq__(self, other):
        return isinstance(other, CycleDomain) and other.m == self.m

    def __hash__(self):
        return hash(("cycle", self.m))

    def __repr__(self):
        return f"CycleDomain({self.m})"


class LoopMap(DigitalMap):
    __slots__ = ()

    @property
    def m(self) -> int:
        return len(self.source)

    def point_sequence(self) -> list:
        return [self.target.points[v] for v in self.table]


def enumerate_loops(X: DigitalImage, m: int, cap: int = 1_000_000) -> list[LoopMap]:
    C = CycleDomain(m)
    try:
        tables = continuous_maps(C, X, cap=cap)
    except ResourceLimitError as exc:
        raise ResourceLimitError(f"more than {cap} {m}-loops in the image", partial=exc.partial) from None
    return [LoopMap(C, X, t) for t in tables]


def is_simple_loop(p: DigitalMap) -> bool:
    t = p.table
    m = len(t)
    X = p.target
    if len(set(t)) != m or not is_continuous(p):
        return False
    for i in range(m):
        for j in range(i + 1, m):
            consecutive = (j - i) in (1, m - 1)
            if X.is_adj(t[i], t[j]) != consecutive:
                return False
    return True


def iter_simple_loops(X: DigitalImage, min_len: int = 4):
    """Yield index sequences of chordless cycles of length >= min_len, each cycle once.

    A cycle is reported starting from its smallest index, in the direction of
    its smaller neighbour.
    """
    nb = [set(r) for r in X.nbrs]
    for s in range(len(X)):
        path = [s]
        on = {s}

        def grow():
            last = path[-1]
            for v in X.nbrs[last]:
                if v <= s or v in on:
                    continue
                # v may touch no earlier path vertex except the predecessor (and s when closing)
                touches = [u for u in path[:-1] if u in nb[v]]
                if touches and touches != [s]:
                    continue
                if touches == [s]:
                    if len(path) + 1 >= min_len and path[1] < v:
                        yield path + [v]
                    continue
                path.append(v)
                on.add(v)
                yield from grow()
                path.pop()
                on.discard(v)

        yield from grow()


def find_simple_loop(X: DigitalImage, min_len: int = 4) -> Optional[list]:
    """Index sequence of some chordless cycle of length >= min_len, or None."""
    return next(iter_simple_loops(X, min_len), None)


@dataclass
class LoopClassTable:
    m: int
    classes: list = field(default_factory=list)  # lists of loop tables, one list per class
    total: int = 0
    count: Optional[int] = None
    status: str = "complete"  # "complete" or "budget"
    bounds: tuple = (0, 0)

    def representatives(self, X: DigitalImage) -> list:
        return [[X.points[v] for v in cls[0]] for cls in self.classes]


def count_loop_classes(X: DigitalImage, m: int, budget: int = DEFAULT_BUDGET,
                       cap: int = 1_000_000) -> LoopClassTable:
    """Partition all m-loops into free-homotopy classes by exploring each class's component."""
    C = CycleDomain(m)
    loops = continuous_maps(C, X, cap=cap)
    remaining = set(loops)
    classes = []
    spent = 0
    for t in loops:
        if t not in remaining:
            continue
        res = bfs_maps(t, C, X, budget=max(budget - spent, 1))
        spent += res.visited
        members = sorted(res.parents)
        if res.status == "budget":
            unresolved = len(remaining)
            return LoopClassTable(m, classes, len(loops), None, "budget",
                                  (len(classes) + 1, len(classes) + unresolved))
        remaining.difference_update(members)
        classes.append(members)
    return LoopClassTable(m, classes, len(loops), len(classes), "complete", (len(classes), len(classes)))
