"""Finite digital images in Z^d with c_k adjacencies.

Points are plain tuples of ints.  A :class:`DigitalImage` keeps its points in
lexicographic order and works internally with point *indices* into that
order, which is what the homotopy and planner engines operate on.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptinessError, InputError, ParseError, ResourceLimitError

Point = tuple


@dataclass(frozen=True, order=True)
class AdjacencyKind:
    dim: int
    k: int

    def __post_init__(self):
        if self.dim < 1 or not 1 <= self.k <= self.dim:
            raise InputError(f"invalid adjacency: dim={self.dim}, k={self.k}")

    @property
    def name(self) -> int:
        """Neighbour count of an interior lattice point (2, 4, 8, 6, 18, 26, ...)."""
        return sum(comb(self.dim, i) * 2**i for i in range(1, self.k + 1))

    @classmethod
    def from_name(cls, name: int) -> "AdjacencyKind":
        for dim in range(1, 4):
            for k in range(1, dim + 1):
                kind = cls(dim, k)
                if kind.name == name:
                    return kind
        raise InputError(f"unknown adjacency name {name}")

    def offsets(self) -> list[tuple]:
        out = []
        for off in itertools.product((-1, 0, 1), repeat=self.dim):
            nz = sum(1 for c in off if c)
            if 1 <= nz <= self.k:
                out.append(off)
        return out

    def __str__(self):
        return f"c{self.k}({self.name}) in Z^{self.dim}"


KIND_2 = AdjacencyKind(1, 1)
KIND_4 = AdjacencyKind(2, 1)
KIND_8 = AdjacencyKind(2, 2)


def as_kind(kind) -> AdjacencyKind:
    if isinstance(kind, AdjacencyKind):
        return kind
    return AdjacencyKind.from_name(int(kind))


def adjacent(p: Sequence[int], q: Sequence[int], kind) -> bool:
    kind = as_kind(kind)
    if len(p) != kind.dim or len(q) != kind.dim:
        raise InputError(f"dimension mismatch: {p}, {q} for {kind}")
    if tuple(p) == tuple(q):
        raise InputError(f"adjacency is defined for distinct points, got {tuple(p)} twice")
    differing = 0
    for a, b in zip(p, q):
        d = abs(a - b)
        if d > 1:
            return False
        differing += d
    return differing <= kind.k


def product_adjacent(a, b, kinds) -> bool:
    """Adjacency in a product of two images; equal pairs count as adjacent."""
    (x1, y1), (x2, y2) = a, b
    kx, ky = (as_kind(k) for k in kinds)
    for pt, kd in ((x1, kx), (x2, kx), (y1, ky), (y2, ky)):
        if len(pt) != kd.dim:
            raise InputError(f"dimension mismatch: {pt} for {kd}")
    x_ok = tuple(x1) == tuple(x2) or adjacent(x1, x2, kx)
    y_ok = tuple(y1) == tuple(y2) or adjacent(y1, y2, ky)
    return x_ok and y_ok


class DigitalImage:
    """Immutable finite point set with an adjacency kind.

    ``nbrs[i]`` lists the indices adjacent to point ``i``; ``eqadj`` is the
    boolean "equal or adjacent" matrix used by every continuity test.
    """

    __slots__ = ("points", "kind", "index", "nbrs", "eqadj", "_hash")

    def __init__(self, points: Iterable[Sequence[int]], kind):
        kind = as_kind(kind)
        pts = [tuple(int(c) for c in p) for p in points]
        if not pts:
            raise InputError("a digital image needs at least one point")
        for p in pts:
            if len(p) != kind.dim:
                raise InputError(f"point {p} does not have dimension {kind.dim}")
        uniq = sorted(set(pts))
        if len(uniq) != len(pts):
            seen = set()
            dup = next(p for p in pts if p in seen or seen.add(p))
            raise InputError(f"duplicate point {dup}")
        self.points = tuple(uniq)
        self.kind = kind
        self.index = {p: i for i, p in enumerate(self.points)}
        offs = kind.offsets()
        nbrs = []
        for p in self.points:
            row = []
            for off in offs:
                q = tuple(a + b for a, b in zip(p, off))
                j = self.index.get(q)
                if j is not None:
                    row.append(j)
            nbrs.append(tuple(sorted(row)))
        self.nbrs = tuple(nbrs)
        n = len(self.points)
        eq = np.eye(n, dtype=np.uint8)
        for i, row in enumerate(self.nbrs):
            eq[i, list(row)] = 1
        eq.setflags(write=False)
        self.eqadj = eq
        self._hash = hash((self.points, kind))

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, p):
        return tuple(p) in self.index

    def __eq__(self, other):
        if not isinstance(other, DigitalImage):
            return NotImplemented
        return self.kind == other.kind and self.points == other.points

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"DigitalImage({list(self.points)!r}, kind={self.kind.name})"

    @property
    def dim(self) -> int:
        return self.kind.dim

    def closed_nbrs(self, i: int) -> tuple:
        return tuple(sorted((i,) + self.nbrs[i]))

    def degree(self, i: int) -> int:
        return len(self.nbrs[i])

    def is_adj(self, i: int, j: int) -> bool:
        return i != j and bool(self.eqadj[i, j])

    def translate(self, offset: Sequence[int]) -> "DigitalImage":
        return DigitalImage([tuple(a + b for a, b in zip(p, offset)) for p in self.points], self.kind)

    def subimage(self, indices: Iterable[int]) -> "DigitalImage":
        return DigitalImage([self.points[i] for i in set(indices)], self.kind)

    def canonical_translate(self) -> "DigitalImage":
        """Translate so that the lexicographically least point sits at the origin."""
        least = self.points[0]
        return self.translate([-c for c in least])

    def distances(self) -> np.ndarray:
        """All-pairs graph distances (-1 for unreachable)."""
        n = len(self)
        dist = np.full((n, n), -1, dtype=np.int64)
        for s in range(n):
            dist[s, s] = 0
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for v in self.nbrs[u]:
                    if dist[s, v] < 0:
                        dist[s, v] = dist[s, u] + 1
                        queue.append(v)
        return dist


def components(X: DigitalImage) -> list[list[int]]:
    seen = [False] * len(X)
    comps = []
    for s in range(len(X)):
        if seen[s]:
            continue
        seen[s] = True
        comp, queue = [], deque([s])
        while queue:
            u = queue.popleft()
            comp.append(u)
            for v in X.nbrs[u]:
                if not seen[v]:
                    seen[v] = True
                    queue.append(v)
        comps.append(sorted(comp))
    return comps


def is_connected(X: DigitalImage) -> bool:
    return len(components(X)) == 1


@dataclass(frozen=True)
class CurveWitness:
    """A simple closed curve together with a cyclic ordering of its points.

    ``ordering[t]`` is the index (into ``image.points``) of the t-th point.
    """

    image: DigitalImage
    ordering: tuple

    @property
    def m(self) -> int:
        return len(self.ordering)

    def position(self) -> dict:
        return {v: t for t, v in enumerate(self.ordering)}

    def point(self, t: int) -> Point:
        return self.image.points[self.ordering[t % self.m]]

    def check(self) -> bool:
        X, order = self.image, self.ordering
        m = len(order)
        if m < 4 or sorted(order) != list(range(len(X))):
            return False
        for t in range(m):
            expected = {order[(t - 1) % m], order[(t + 1) % m]}
            if set(X.nbrs[order[t]]) != expected:
                return False
        return True


def _shoelace(pts) -> float:
    area = 0
    for (x1, y1), (x2, y2) in zip(pts, pts[1:] + pts[:1]):
        area += x1 * y2 - x2 * y1
    return area


def detect_simple_closed_curve(X: DigitalImage) -> CurveWitness | None:
    """Return a witness ordering if X is a digital simple closed curve.

    The ordering starts at the least point; planar curves are oriented
    clockwise (the orientation of the printed coordinate lists).
    """
    m = len(X)
    if m < 4 or any(len(nb) != 2 for nb in X.nbrs):
        return None
    order = [0]
    prev, cur = None, 0
    while True:
        a, b = X.nbrs[cur]
        nxt = a if a != prev else b
        if nxt == 0:
            break
        if len(order) >= m:
            return None
        order.append(nxt)
        prev, cur = cur, nxt
    if len(order) != m:
        return None
    if X.dim == 2 and _shoelace([X.points[i] for i in order]) > 0:
        order = [order[0]] + order[:0:-1]
    w = CurveWitness(X, tuple(order))
    return w if w.check() else None


def _hexagon_family(m: int) -> list[Point]:
    if m % 2 == 0:
        k = (m - 2) // 2
        top = [(x, 1) for x in range(1, k + 1)]
        bottom = [(x, -1) for x in range(k, 0, -1)]
        return [(0, 0)] + top + [(k + 1, 0)] + bottom
    k = (m - 3) // 2
    top = [(x, 1) for x in range(1, k + 1)]
    bottom = [(x, -2) for x in range(k, 1, -1)]
    return [(0, 0)] + top + [(k + 1, 0), (k + 1, -1)] + bottom + [(1, -1)]


def _rectangle_family(m: int) -> list[Point]:
    if m == 4:
        return [(0, 0), (0, 1), (1, 1), (1, 0)]
    width = m // 2 - 1
    left = [(0, y) for y in range(3)]
    top = [(x, 2) for x in range(1, width)]
    right = [(width - 1, y) for y in (1, 0)]
    bottom = [(x, 0) for x in range(width - 2, 0, -1)]
    return left + top + right + bottom


def generate_cycle(m: int, kind) -> DigitalImage:
    """A concrete m-point simple closed curve in Z^2 (4- or 8-adjacency)."""
    kind = as_kind(kind)
    if kind.dim != 2:
        raise InputError("generate_cycle supports 4- and 8-adjacency in Z^2 only")
    if m < 4:
        raise InputError(f"simple closed curves have at least 4 points, got m={m}")
    if m == 5:
        raise EmptinessError("no simple closed curve with 5 points exists")
    if kind.k == 1:
        if m % 2 or m in (6,):
            raise EmptinessError(f"no simple closed 4-curve with {m} points exists")
        pts = _rectangle_family(m)
    else:
        pts = _hexagon_family(m)
    X = DigitalImage(pts, kind)
    if detect_simple_closed_curve(X) is None or len(X) != m:
        raise AssertionError(f"generated family broke for m={m}, kind={kind.name}")
    return X


def cycle_witness(m: int, kind) -> CurveWitness:
    return detect_simple_closed_curve(generate_cycle(m, kind))


def search_cycles(m: int, kind, window: int, cap: int = 5_000_000) -> list[DigitalImage]:
    """All simple closed curves with m points inside a window x window box, up to translation.

    Depth-first growth of chordless paths from the curve's least point; every
    point after the start must be lexicographically larger than it.
    """
    kind = as_kind(kind)
    if kind.dim != 2:
        raise InputError("search_cycles works in Z^2")
    if m < 4:
        raise InputError("m must be at least 4")
    if window < 1:
        raise InputError("window must be positive")
    offs = kind.offsets()

    def adj(p, q):
        return p != q and max(abs(p[0] - q[0]), abs(p[1] - q[1])) == 1 and (
            kind.k == 2 or abs(p[0] - q[0]) + abs(p[1] - q[1]) == 1
        )

    found = {}
    nodes = 0
    for y0 in range(window):
        start = (0, y0)
        path = [start]
        on_path = {start}

        def extend():
            nonlocal nodes
            last = path[-1]
            for off in offs:
                q = (last[0] + off[0], last[1] + off[1])
                if not (0 <= q[0] < window and 0 <= q[1] < window) or q <= start or q in on_path:
                    continue
                nodes += 1
                if nodes > cap:
                    raise ResourceLimitError(
                        f"search_cycles exceeded {cap} candidates", partial=len(found)
                    )
                # q may touch only its predecessor, plus the start when it closes the curve
                closing = len(path) == m - 1
                bad = False
                for r in path[:-1]:
                    if adj(q, r) and not (closing and r == start):
                        bad = True
                        break
                if bad:
                    continue
                if closing:
                    if adj(q, start):
                        X = DigitalImage(path + [q], kind).canonical_translate()
                        found.setdefault(X.points, X)
                    continue
                path.append(q)
                on_path.add(q)
                extend()
                path.pop()
                on_path.discard(q)

        extend()
    return [found[key] for key in sorted(found)]


def parse_image(text: str, source: str | None = None) -> DigitalImage:
    dim = k = None
    pts = []
    lines_of = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        try:
            if head == "dim":
                if dim is not None or len(rest) != 1:
                    raise ParseError("expected a single 'dim <d>' line", lineno, source)
                dim = int(rest[0])
                if dim < 1:
                    raise ParseError(f"dimension must be positive, got {dim}", lineno, source)
            elif head == "k":
                if dim is None:
                    raise ParseError("'k' must follow 'dim'", lineno, source)
                if k is not None or len(rest) != 1:
                    raise ParseError("expected a single 'k <k>' line", lineno, source)
                k = int(rest[0])
                if not 1 <= k <= dim:
                    raise ParseError(f"invalid adjacency k={k} for dim={dim}", lineno, source)
            elif head == "p":
                if dim is None or k is None:
                    raise ParseError("points must follow the 'dim' and 'k' lines", lineno, source)
                if len(rest) != dim:
                    raise ParseError(f"expected {dim} coordinates, got {len(rest)}", lineno, source)
                p = tuple(int(c) for c in rest)
                if p in lines_of:
                    raise ParseError(
                        f"duplicate point {p} (first on line {lines_of[p]})", lineno, source
                    )
                lines_of[p] = lineno
                pts.append(p)
            else:
                raise ParseError(f"unrecognised directive {head!r}", lineno, source)
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"bad integer in {raw.strip()!r}", lineno, source) from None
    if dim is None or k is None:
        raise ParseError("missing 'dim' or 'k' header", None, source)
    if not pts:
        raise ParseError("image has no points", None, source)
    return DigitalImage(pts, AdjacencyKind(dim, k))


def serialize_image(X: DigitalImage, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"dim {X.kind.dim}")
    lines.append(f"k {X.kind.k}")
    lines.extend("p " + " ".join(str(c) for c in p) for p in X.points)
    return "\n".join(lines) + "\n"


def load_image(path) -> DigitalImage:
    with open(path) as fh:
        return parse_image(fh.read(), source=str(path))


def save_image(X: DigitalImage, path, comment=None):
    with open(path, "w") as fh:
        fh.write(serialize_image(X, comment))


def connected_images(kind, window: int, max_points: int, cap: int = 2_000_000) -> list[DigitalImage]:
    """Every connected image inside a window^d box with at most max_points points, up to translation."""
    kind = as_kind(kind)
    box = list(itertools.product(range(window), repeat=kind.dim))
    offs = kind.offsets()
    inbox = set(box)
    seen = set()
    out = []
    for p in box:
        X = DigitalImage([p], kind).canonical_translate()
        if X.points not in seen:
            seen.add(X.points)
            out.append(X)
    # grow polyomino-style: each connected set arises from a smaller one by adding a neighbour
    level = [frozenset([p]) for p in box]
    sets_seen = set(level)
    for size in range(2, max_points + 1):
        nxt = []
        for S in level:
            for p in S:
                for off in offs:
                    q = tuple(a + b for a, b in zip(p, off))
                    if q in inbox and q not in S:
                        T = S | {q}
                        if T in sets_seen:
                            continue
                        sets_seen.add(T)
                        if len(sets_seen) > cap:
                            raise ResourceLimitError(f"corpus exceeded {cap} subsets", partial=len(out))
                        nxt.append(T)
                        X = DigitalImage(T, kind).canonical_translate()
                        if X.points not in seen:
                            seen.add(X.points)
                            out.append(X)
        level = nxt
    out.sort(key=lambda X: (len(X), X.points))
    return out
