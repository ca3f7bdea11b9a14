"""Pure-Python/numpy implementations of the hot kernels.

These are the reference versions; ``_kernels.pyx`` mirrors them and is
preferred when it has been compiled.
"""

from __future__ import annotations

from math import gcd

import numpy as np

BACKEND = "python"


def _content(row: dict) -> int:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    return g


def int_rank(rows, ncols: int) -> int:
    """Rank over Q of a sparse integer matrix.

    ``rows`` is an iterable of ``{column: int}`` maps.  Rows are folded one by
    one into an echelon form keyed by leading column; eliminations are
    fraction-free and every row is divided by its content, so entries stay
    small.
    """
    pivots: dict[int, dict] = {}
    rank = 0
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


def adjugate_batch(P: np.ndarray):
    """Exact determinants and adjugates of a batch of small integer matrices.

    Returns ``(det, adj)`` with ``adj[t] @ P[t] == det[t] * I``.  Computed
    from Python-int cofactors and stored as int64; callers keep
    entries small enough for that to be exact.
    """
    T, n, _ = P.shape
    dets = np.zeros(T, dtype=np.int64)
    adjs = np.zeros((T, n, n), dtype=np.int64)
    for t in range(T):
        d, adj = _adjugate(P[t].tolist())
        dets[t] = d
        adjs[t] = adj
    return dets, adjs


def _det_bareiss(M) -> int:
    A = [list(row) for row in M]
    n = len(A)
    prev = 1
    sign = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            piv = next((r for r in range(k + 1, n) if A[r][k] != 0), None)
            if piv is None:
                return 0
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        pk = A[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * pk - A[i][k] * A[k][j]) // prev
        prev = pk
    return sign * A[n - 1][n - 1] if n else 1


def _adjugate(M):
    n = len(M)
    M = [list(map(int, row)) for row in M]
    det = _det_bareiss(M)
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:i] + row[i + 1:] for r, row in enumerate(M) if r != j]
            adj[i][j] = (-1) ** (i + j) * _det_bareiss(minor) if n > 1 else 1
    return det, adj


def rebase_modp(P: np.ndarray, adj: np.ndarray, c: np.ndarray, p: int) -> np.ndarray:
    """Batch of scaled rebased tensors modulo a prime p < 2**29.

    ``out[t, i, j, k] = sum P[t,i,a] P[t,j,b] c[a,b,r] adj[t,r,k] mod p``.
    Reduction mod p is a ring map, so every exact zero stays zero, which is
    all the search prefilter relies on.  With residues below 2**29 each
    contraction over n <= 8 terms stays below 2**61.
    """
    P = np.mod(P, p).astype(np.int64)
    adj = np.mod(adj, p).astype(np.int64)
    c = np.mod(c, p).astype(np.int64)
    M = np.einsum("abr,trk->tabk", c, adj) % p
    X = np.einsum("tjb,tabk->tajk", P, M) % p
    return np.einsum("tia,tajk->tijk", P, X) % p
