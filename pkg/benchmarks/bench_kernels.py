"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Each workload is taken from a real search: one-step neighbours of the
identity on a cycle, continuity of every loop in a class table, the pair check
of a planner verification, and the compatibility masks of the oracle CSP.
Prints the best time per backend and the speed-up.
"""
from __future__ import annotations

import argparse
import itertools
import timeit

import numpy as np

from digitop import AdjacencyKind, cycle_witness
from digitop._kernels import _pykernels, compiled
from digitop.higher import _ProductGraph, loop_planner
from digitop.morph import _back, _closed
from digitop.planner import product_neighbors, walks

K4 = AdjacencyKind(2, 1)
K8 = AdjacencyKind(2, 2)


def workloads():
    Z = cycle_witness(6, K8).image
    P = _ProductGraph(Z)
    pr1 = [a for a, b in P.tuples]
    closed = [_closed(Z, v) for v in range(len(Z))]
    yield "enumerate_assignments (moves of C_6 x C_6 -> C_6)", "enumerate_assignments", (
        [closed[v] for v in pr1], _back(P), Z.eqadj, 10**7)

    Y = cycle_witness(8, K4).image
    tables = list(itertools.product(range(8), repeat=4))
    edges = np.asarray([(0, 1), (1, 2), (2, 3), (3, 0)], dtype=np.int64)
    yield "is_continuous (all 4096 4-tuples into C_8)", "is_continuous_many", (tables, edges, Y.eqadj)

    C = cycle_witness(6, K8)
    plan = loop_planner(C, 4)
    sec = plan.sections[1]
    tuples = sorted(sec)
    idx = {t: i for i, t in enumerate(tuples)}
    paths = np.asarray([sec[t].steps for t in tuples], dtype=np.int64)
    pairs = np.asarray([(idx[t], idx[u]) for t in tuples for u in product_neighbors(C.image, t)
                        if u in idx and idx[u] > idx[t]], dtype=np.int64)
    yield f"pair_violations ({len(pairs)} pairs, C_6 n=4)", "pair_violations", (paths, pairs, C.image.eqadj)

    ws = walks(Z, 6, 10**6)
    dom = np.asarray(ws[(0, 3)], dtype=np.int64)
    other = np.asarray(ws[(1, 3)], dtype=np.int64)
    yield "compatible_mask (C_6 walks, L=6)", "compatible_mask_many", (dom, other, Z.eqadj)


def call(mod, name, args):
    if name == "is_continuous_many":
        tables, edges, eq = args
        return [mod.is_continuous(t, edges, eq) for t in tables]
    if name == "compatible_mask_many":
        dom, other, eq = args
        return [mod.compatible_mask(p, other, eq) for p in dom]
    return getattr(mod, name)(*args)


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--repeat", type=int, default=5)
    opts = ap.parse_args()
    if compiled is None:
        print("compiled extension not built; only the fallback is available")
    print(f"{'workload':46s} {'python':>10s} {'compiled':>10s} {'speed-up':>9s}")
    for label, name, args in workloads():
        py = min(timeit.repeat(lambda: call(_pykernels, name, args), number=1, repeat=opts.repeat))
        if compiled is None:
            print(f"{label:46s} {py:10.4f} {'-':>10s} {'-':>9s}")
            continue
        a, b = call(_pykernels, name, args), call(compiled, name, args)
        same = [np.asarray(x).tolist() for x in (a if isinstance(a, list) else [a])] == \
               [np.asarray(x).tolist() for x in (b if isinstance(b, list) else [b])]
        c = min(timeit.repeat(lambda: call(compiled, name, args), number=1, repeat=opts.repeat))
        print(f"{label:46s} {py:10.4f} {c:10.4f} {py / c:8.1f}x{'' if same else '  MISMATCH'}")


if __name__ == "__main__":
    main()
