# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels; same signatures as _pykernels."""
import numpy as np
cimport numpy as cnp

BACKEND = "cython"


def enumerate_assignments(domains, back, eqadj, Py_ssize_t cap):
    cdef Py_ssize_t n = len(domains)
    if n == 0:
        return [()]
    cdef const cnp.uint8_t[:, ::1] eq = np.ascontiguousarray(eqadj, dtype=np.uint8)
    # flatten domains and back-edges into CSR arrays
    dom_ptr_py = [0]
    dom_val_py = []
    back_ptr_py = [0]
    back_val_py = []
    for r in range(n):
        dom_val_py.extend(domains[r])
        dom_ptr_py.append(len(dom_val_py))
        back_val_py.extend(back[r])
        back_ptr_py.append(len(back_val_py))
    cdef Py_ssize_t[::1] dom_ptr = np.asarray(dom_ptr_py, dtype=np.intp)
    cdef Py_ssize_t[::1] dom_val = np.asarray(dom_val_py + [0], dtype=np.intp)
    cdef Py_ssize_t[::1] back_ptr = np.asarray(back_ptr_py, dtype=np.intp)
    cdef Py_ssize_t[::1] back_val = np.asarray(back_val_py + [0], dtype=np.intp)
    cdef Py_ssize_t[::1] g = np.zeros(n, dtype=np.intp)
    cdef Py_ssize_t[::1] pos = np.zeros(n, dtype=np.intp)
    cdef Py_ssize_t i = 0, j, v, b
    cdef bint ok
    out = []
    cdef Py_ssize_t limit = cap + 1
    pos[0] = dom_ptr[0]
    while i >= 0:
        if pos[i] >= dom_ptr[i + 1]:
            i -= 1
            if i >= 0:
                pos[i] += 1
            continue
        v = dom_val[pos[i]]
        ok = True
        for b in range(back_ptr[i], back_ptr[i + 1]):
            j = back_val[b]
            if not eq[v, g[j]]:
                ok = False
                break
        if not ok:
            pos[i] += 1
            continue
        g[i] = v
        if i == n - 1:
            out.append(tuple([g[k] for k in range(n)]))
            if len(out) >= limit:
                break
            pos[i] += 1
        else:
            i += 1
            pos[i] = dom_ptr[i]
    return out


def is_continuous(table, edges, eqadj):
    cdef const cnp.uint8_t[:, ::1] eq = np.ascontiguousarray(eqadj, dtype=np.uint8)
    cdef Py_ssize_t[::1] t = np.asarray(table, dtype=np.intp)
    if len(edges) == 0:
        return True
    cdef Py_ssize_t[:, ::1] e = np.ascontiguousarray(np.asarray(edges, dtype=np.intp).reshape(-1, 2))
    cdef Py_ssize_t k
    for k in range(e.shape[0]):
        if not eq[t[e[k, 0]], t[e[k, 1]]]:
            return False
    return True


def pair_violations(paths, pairs, eqadj):
    cdef const cnp.uint8_t[:, ::1] eq = np.ascontiguousarray(eqadj, dtype=np.uint8)
    cdef Py_ssize_t[:, ::1] P = np.ascontiguousarray(np.asarray(paths, dtype=np.intp))
    cdef Py_ssize_t[:, ::1] pr = np.ascontiguousarray(np.asarray(pairs, dtype=np.intp).reshape(-1, 2))
    cdef Py_ssize_t k, t, a, b, T = P.shape[1]
    bad = []
    for k in range(pr.shape[0]):
        a = pr[k, 0]
        b = pr[k, 1]
        for t in range(T):
            if not eq[P[a, t], P[b, t]]:
                bad.append(k)
                break
    return np.asarray(bad, dtype=np.int64)


def compatible_mask(path, candidates, eqadj):
    cdef const cnp.uint8_t[:, ::1] eq = np.ascontiguousarray(eqadj, dtype=np.uint8)
    cdef Py_ssize_t[::1] p = np.asarray(path, dtype=np.intp)
    cand_arr = np.asarray(candidates, dtype=np.intp)
    if cand_arr.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    cdef Py_ssize_t[:, ::1] C = np.ascontiguousarray(cand_arr)
    out = np.ones(C.shape[0], dtype=np.uint8)
    cdef cnp.uint8_t[::1] o = out
    cdef Py_ssize_t k, t, T = C.shape[1]
    for k in range(C.shape[0]):
        for t in range(T):
            if not eq[p[t], C[k, t]]:
                o[k] = 0
                break
    return out.astype(bool)
