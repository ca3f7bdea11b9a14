# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels in ``_kernels_py``.

Same contracts as the pure-Python module; selected at import by
``nildegen.kernels`` when the extension is available.
"""

from math import gcd

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t

cnp.import_array()

BACKEND = "cython"


cdef object _content(dict row):
    cdef object g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    return g


def int_rank(rows, Py_ssize_t ncols):
    """Rank over Q of a sparse integer matrix given as ``{col: int}`` rows."""
    cdef dict pivots = {}
    cdef Py_ssize_t rank = 0
    cdef dict r, p, new
    cdef Py_ssize_t lead, c
    cdef object a, b, g, fa, fb, v, w
    for raw in rows:
        r = {c: v for c, v in raw.items() if v}
        while r:
            lead = min(r)
            p = pivots.get(lead)
            if p is None:
                g = _content(r)
                if r[lead] < 0:
                    g = -g
                if g != 1:
                    r = {c: v // g for c, v in r.items()}
                pivots[lead] = r
                rank += 1
                if rank == ncols:
                    return rank
                break
            a = r[lead]
            b = p[lead]
            g = gcd(a, b)
            fa = b // g
            fb = a // g
            new = {c: v * fa for c, v in r.items()}
            for c, v in p.items():
                w = new.get(c, 0) - v * fb
                if w:
                    new[c] = w
                else:
                    new.pop(c, None)
            if new:
                g = _content(new)
                if g != 1:
                    new = {c: v // g for c, v in new.items()}
            r = new
    return rank


cdef int64_t _det_small(int64_t[:, :] src, Py_ssize_t n, int64_t* work) nogil:
    """Bareiss determinant of an n x n int64 matrix (n <= 8), exact when small."""
    cdef Py_ssize_t i, j, k, piv
    cdef int64_t prev = 1, pk, tmp
    cdef int sign = 1
    for i in range(n):
        for j in range(n):
            work[i * 8 + j] = src[i, j]
    for k in range(n - 1):
        if work[k * 8 + k] == 0:
            piv = -1
            for i in range(k + 1, n):
                if work[i * 8 + k] != 0:
                    piv = i
                    break
            if piv < 0:
                return 0
            for j in range(n):
                tmp = work[k * 8 + j]
                work[k * 8 + j] = work[piv * 8 + j]
                work[piv * 8 + j] = tmp
            sign = -sign
        pk = work[k * 8 + k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                work[i * 8 + j] = (work[i * 8 + j] * pk - work[i * 8 + k] * work[k * 8 + j]) // prev
        prev = pk
    return sign * work[(n - 1) * 8 + (n - 1)]


def adjugate_batch(cnp.ndarray P_in):
    """Exact determinants and adjugates of a batch of small integer matrices."""
    cdef int64_t[:, :, :] P = np.ascontiguousarray(P_in, dtype=np.int64)
    cdef Py_ssize_t T = P.shape[0], n = P.shape[1]
    if n > 8:
        raise ValueError("adjugate_batch supports n <= 8")
    dets_arr = np.zeros(T, dtype=np.int64)
    adjs_arr = np.zeros((T, n, n), dtype=np.int64)
    cdef int64_t[:] dets = dets_arr
    cdef int64_t[:, :, :] adjs = adjs_arr
    minor_arr = np.zeros((8, 8), dtype=np.int64)
    cdef int64_t[:, :] minor = minor_arr
    cdef int64_t work[64]
    cdef Py_ssize_t t, i, j, r, cc, mr, mc
    cdef int64_t val
    with nogil:
        for t in range(T):
            dets[t] = _det_small(P[t], n, work)
            if n == 1:
                adjs[t, 0, 0] = 1
                continue
            for i in range(n):
                for j in range(n):
                    # cofactor C_ji: drop row j and column i
                    mr = 0
                    for r in range(n):
                        if r == j:
                            continue
                        mc = 0
                        for cc in range(n):
                            if cc == i:
                                continue
                            minor[mr, mc] = P[t, r, cc]
                            mc += 1
                        mr += 1
                    val = _det_small(minor, n - 1, work)
                    adjs[t, i, j] = -val if (i + j) % 2 else val
    return dets_arr, adjs_arr


def rebase_modp(cnp.ndarray P_in, cnp.ndarray adj_in, cnp.ndarray c_in, int64_t p):
    """Batch of scaled rebased tensors modulo a prime p < 2**29 (see ``_kernels_py``)."""
    cdef int64_t[:, :, :] P = np.ascontiguousarray(np.mod(P_in, p), dtype=np.int64)
    cdef int64_t[:, :, :] adj = np.ascontiguousarray(np.mod(adj_in, p), dtype=np.int64)
    cdef int64_t[:, :, :] c = np.ascontiguousarray(np.mod(c_in, p), dtype=np.int64)
    cdef Py_ssize_t T = P.shape[0], n = P.shape[1]
    out_arr = np.zeros((T, n, n, n), dtype=np.int64)
    cdef int64_t[:, :, :, :] out = out_arr
    # M[a,b,k] = sum_r c[a,b,r] adj[r,k];  X[a,j,k] = sum_b P[j,b] M[a,b,k]
    M_arr = np.zeros((n, n, n), dtype=np.int64)
    X_arr = np.zeros((n, n, n), dtype=np.int64)
    cdef int64_t[:, :, :] M = M_arr
    cdef int64_t[:, :, :] X = X_arr
    cdef Py_ssize_t t, i, j, k, a, b, r
    cdef int64_t acc, cv, pv
    with nogil:
        for t in range(T):
            for a in range(n):
                for b in range(n):
                    for k in range(n):
                        acc = 0
                        for r in range(n):
                            cv = c[a, b, r]
                            if cv != 0:
                                acc = (acc + cv * adj[t, r, k]) % p
                        M[a, b, k] = acc
            for a in range(n):
                for j in range(n):
                    for k in range(n):
                        acc = 0
                        for b in range(n):
                            pv = P[t, j, b]
                            if pv != 0:
                                acc = (acc + pv * M[a, b, k]) % p
                        X[a, j, k] = acc
            for i in range(n):
                for j in range(n):
                    for k in range(n):
                        acc = 0
                        for a in range(n):
                            pv = P[t, i, a]
                            if pv != 0:
                                acc = (acc + pv * X[a, j, k]) % p
                        out[t, i, j, k] = acc
    return out_arr
