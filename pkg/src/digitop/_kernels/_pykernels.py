"""Pure-Python / numpy implementations of the hot kernels."""
import numpy as np

BACKEND = "python"


def enumerate_assignments(domains, back, eqadj, cap):
    """All tuples g with g[i] in domains[i] and eqadj[g[i], g[j]] for j in back[i].

    Stops after cap + 1 results so the caller can detect overflow.
    """
    n = len(domains)
    rows = [bytes(r) for r in np.asarray(eqadj, dtype=np.uint8)]
    out = []
    g = [0] * n
    limit = cap + 1

    def rec(i):
        if i == n:
            out.append(tuple(g))
            return len(out) >= limit
        bi = back[i]
        for v in domains[i]:
            row = rows[v]
            for j in bi:
                if not row[g[j]]:
                    break
            else:
                g[i] = v
                if rec(i + 1):
                    return True
        return False

    if n == 0:
        return [()]
    rec(0)
    return out


def is_continuous(table, edges, eqadj):
    eq = np.asarray(eqadj)
    if len(edges) == 0:
        return True
    t = np.asarray(table, dtype=np.int64)
    e = np.asarray(edges, dtype=np.int64)
    return bool(eq[t[e[:, 0]], t[e[:, 1]]].all())


def pair_violations(paths, pairs, eqadj):
    """Indices of pairs (i, j) whose paths are not pointwise equal-or-adjacent."""
    paths = np.asarray(paths, dtype=np.int64)
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    if len(pairs) == 0:
        return np.zeros(0, dtype=np.int64)
    eq = np.asarray(eqadj, dtype=bool)
    bad = []
    step = 1 << 16
    for s in range(0, len(pairs), step):
        chunk = pairs[s:s + step]
        ok = eq[paths[chunk[:, 0]], paths[chunk[:, 1]]].all(axis=1)
        bad.append(np.nonzero(~ok)[0] + s)
    return np.concatenate(bad)


def compatible_mask(path, candidates, eqadj):
    """Boolean mask of candidate paths pointwise equal-or-adjacent to ``path``."""
    eq = np.asarray(eqadj, dtype=bool)
    cand = np.asarray(candidates, dtype=np.int64)
    if cand.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    return eq[np.asarray(path, dtype=np.int64)[None, :], cand].all(axis=1)
