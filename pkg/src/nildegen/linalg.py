"""Exact linear algebra over Q(i) and Q(i)(s).

Dense routines take lists of rows whose entries support field arithmetic
and truthiness (GaussianRational or RatFunc).  Large concrete systems go
through :func:`rank_gaussian_sparse`, which realifies Q(i) and hands an
integer matrix to the compiled kernel.
"""

from __future__ import annotations

from math import gcd

from . import kernels
from .scalars import ONE, ZERO, GaussianRational, RatFunc, UniPoly, as_gaussian

__all__ = [
    "SingularMatrix",
    "rref",
    "rank",
    "nullspace",
    "det",
    "inverse",
    "identity",
    "matmul",
    "rank_gaussian_sparse",
    "poly_det",
    "poly_adjugate",
]


class SingularMatrix(ArithmeticError):
    """Raised when an exact determinant vanishes where an inverse is needed."""


def identity(n: int, one=ONE, zero=ZERO):
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def matmul(A, B):
    m = len(B[0]) if B else 0
    out = []
    for row in A:
        acc = []
        for j in range(m):
            s = None
            for a, brow in zip(row, B):
                if a and brow[j]:
                    s = a * brow[j] if s is None else s + a * brow[j]
            acc.append(s if s is not None else row[0] * 0 if row else ZERO)
        out.append(acc)
    return out


def rref(rows):
    """Reduced row echelon form.

    Returns ``(nonzero_rows, pivot_columns)``; the input is not modified.
    """
    M = [list(r) for r in rows]
    if not M:
        return [], []
    ncols = len(M[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv if x else x for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [a - f * b if b else a for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def nullspace(rows, ncols: int, zero=ZERO, one=ONE):
    """Basis of {x : rows . x = 0}, one vector per free column."""
    R, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for row, p in zip(R, pivots):
            if row[f]:
                v[p] = -row[f]
        basis.append(v)
    return basis


def det(M):
    """Determinant by elimination over the entries' field."""
    n = len(M)
    A = [list(r) for r in M]
    result = None
    sign = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c]), None)
        if piv is None:
            return A[0][0] * 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            sign = -sign
        p = A[c][c]
        result = p if result is None else result * p
        inv = 1 / p
        for i in range(c + 1, n):
            if A[i][c]:
                f = A[i][c] * inv
                A[i] = [a - f * b if b else a for a, b in zip(A[i], A[c])]
    if result is None:
        return ONE
    return result if sign == 1 else -result


def inverse(M):
    n = len(M)
    one = M[0][0] * 0 + 1
    zero = one * 0
    aug = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(M)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise SingularMatrix("matrix is singular")
    return [row[n:] for row in R]


# ---------------------------------------------------------------------------
# large concrete systems


def rank_gaussian_sparse(rows, ncols: int) -> int:
    """Rank over Q(i) of a sparse system ``[{col: GaussianRational}, ...]``.

    Each row is scaled to Gaussian integers.  Real systems go straight to the
    integer kernel; otherwise the system is realified (x = u + i v), whose
    rank over Q is exactly twice the rank over Q(i).
    """
    int_rows = []
    real = True
    for row in rows:
        items = [(c, as_gaussian(v)) for c, v in row.items() if v]
        if not items:
            continue
        den = 1
        for _, v in items:
            den = den * v.den // gcd(den, v.den)
        scaled = [(c, v.re * (den // v.den), v.im * (den // v.den)) for c, v in items]
        if any(im for _, _, im in scaled):
            real = False
        int_rows.append(scaled)
    if real:
        return kernels.int_rank([{c: re for c, re, _ in r} for r in int_rows], ncols)
    realified = []
    for r in int_rows:
        # real part: sum re*u - im*v ; imaginary part: sum im*u + re*v
        re_row = {}
        im_row = {}
        for c, a, b in r:
            if a:
                re_row[c] = a
                im_row[ncols + c] = a
            if b:
                re_row[ncols + c] = -b
                im_row[c] = b
        realified.append(re_row)
        realified.append(im_row)
    r2 = kernels.int_rank(realified, 2 * ncols)
    return r2 // 2


# ---------------------------------------------------------------------------
# polynomial matrices (parametric bases)


def _minor_dets(Q, rows_order):
    """det of Q restricted to ``rows_order`` x (column subsets), memoized."""
    n = len(Q)
    memo = {}

    def sub(depth: int, cols: tuple) -> UniPoly:
        if depth == len(rows_order):
            return UniPoly.constant(1)
        key = (depth, cols)
        hit = memo.get(key)
        if hit is not None:
            return hit
        r = rows_order[depth]
        acc = UniPoly(())
        for pos, c in enumerate(cols):
            q = Q[r][c]
            if not q:
                continue
            rest = cols[:pos] + cols[pos + 1:]
            m = sub(depth + 1, rest)
            if not m:
                continue
            term = q * m
            acc = acc - term if pos % 2 else acc + term
        memo[key] = acc
        return acc

    return sub


def poly_det(Q) -> UniPoly:
    """Determinant of a square matrix of UniPoly by memoized Laplace expansion."""
    n = len(Q)
    return _minor_dets(Q, list(range(n)))(0, tuple(range(n)))


def poly_adjugate(Q):
    """Adjugate of a square UniPoly matrix: adj(Q) Q = det(Q) I."""
    n = len(Q)
    adj = [[UniPoly(()) for _ in range(n)] for _ in range(n)]
    if n == 1:
        adj[0][0] = UniPoly.constant(1)
        return adj
    for j in range(n):
        rows_order = [r for r in range(n) if r != j]
        sub = _minor_dets(Q, rows_order)
        for i in range(n):
            cols = tuple(c for c in range(n) if c != i)
            m = sub(0, cols)
            adj[i][j] = -m if (i + j) % 2 else m
    return adj
