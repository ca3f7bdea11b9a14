"""Borel-stable condition sets on structure constants and basis search.

A condition set mixes containment clauses between sums of products of the
flag spaces A_i = <e_i, ..., e_n> and polynomial identities in the
structure constants c(i, j, k).  ``search_basis`` looks for a basis in
which an algebra satisfies a set.  It screens candidates modulo a prime
and re-checks every survivor exactly, so it never reports a false find.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .algebra import Algebra, DimensionMismatch, Subspace, change_basis, subspace_product
from .scalars import ONE, ZERO, GaussianRational, as_gaussian, format_gaussian

__all__ = [
    "ProductMode",
    "Flag",
    "Prod",
    "Power",
    "Sum",
    "Containment",
    "Poly",
    "PolyClause",
    "ConditionSet",
    "NonHomogeneousClause",
    "eval_conditions",
    "search_basis",
    "SearchResult",
    "PRIME",
]

# largest prime below 2**29 that is 3 mod 4, so F_p[i] is a field
PRIME = 536870879


class NonHomogeneousClause(ValueError):
    pass


class ProductMode(str, enum.Enum):
    ONE_SIDED = "one_sided"
    SYMMETRIC = "symmetric"


# ---------------------------------------------------------------------------
# subspace expressions


class SubExpr:
    __slots__ = ()

    def __add__(self, other):
        return Sum(_terms(self) + _terms(other))

    def __mul__(self, other):
        return Prod(self, other)

    def __pow__(self, m: int):
        return Power(self, m)


def _terms(e) -> tuple:
    return e.terms if isinstance(e, Sum) else (e,)


@dataclass(frozen=True)
class Flag(SubExpr):
    index: int

    def __str__(self):
        return f"A{self.index}"

    def max_index(self) -> int:
        return self.index


@dataclass(frozen=True)
class Prod(SubExpr):
    left: SubExpr
    right: SubExpr

    def __str__(self):
        return f"{_paren(self.left, 2)}*{_paren(self.right, 3)}"

    def max_index(self) -> int:
        return max(self.left.max_index(), self.right.max_index())


@dataclass(frozen=True)
class Power(SubExpr):
    base: SubExpr
    exp: int

    def __str__(self):
        return f"{_paren(self.base, 3)}^{self.exp}"

    def max_index(self) -> int:
        return self.base.max_index()


@dataclass(frozen=True)
class Sum(SubExpr):
    terms: tuple

    def __str__(self):
        return " + ".join(str(t) for t in self.terms)

    def max_index(self) -> int:
        return max(t.max_index() for t in self.terms)


def _prec(e) -> int:
    if isinstance(e, Sum):
        return 1
    if isinstance(e, Prod):
        return 2
    return 3


def _paren(e, need: int) -> str:
    return f"({e})" if _prec(e) < need else str(e)


def eval_subexpr(A: Algebra, e: SubExpr, symmetric: bool = False, _memo=None) -> Subspace:
    memo = {} if _memo is None else _memo
    hit = memo.get(e)
    if hit is not None:
        return hit
    n = A.dim
    if isinstance(e, Flag):
        out = Subspace.flag(n, e.index)
    elif isinstance(e, Sum):
        out = Subspace(n)
        for t in e.terms:
            out = out + eval_subexpr(A, t, symmetric, memo)
    elif isinstance(e, Prod):
        out = subspace_product(
            A, eval_subexpr(A, e.left, symmetric, memo), eval_subexpr(A, e.right, symmetric, memo), symmetric
        )
    elif isinstance(e, Power):
        pows = [None, eval_subexpr(A, e.base, symmetric, memo)]
        for k in range(2, e.exp + 1):
            acc = Subspace(n)
            for a in range(1, k):
                acc = acc + subspace_product(A, pows[a], pows[k - a], symmetric)
            pows.append(acc)
        out = pows[e.exp]
    else:
        raise TypeError(f"not a subspace expression: {e!r}")
    memo[e] = out
    return out


@dataclass(frozen=True)
class Containment:
    """``expr`` lies in A_bound; ``zero`` marks the printed form ``expr = 0``."""

    expr: SubExpr
    bound: int | None
    zero: bool = False

    def __str__(self):
        return f"{self.expr} = 0" if self.zero else f"{self.expr} sub A{self.bound}"


# ---------------------------------------------------------------------------
# polynomials in the structure constants


def _mono_mul(a: tuple, b: tuple) -> tuple:
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


class Poly:
    """Sparse polynomial over Q(i) in variables c(i, j, k), 1-based triples."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for mono, c in (terms or {}).items():
            c = as_gaussian(c)
            if c:
                clean[mono] = clean.get(mono, ZERO) + c
        self.terms = {m: c for m, c in clean.items() if c}

    @classmethod
    def const(cls, c) -> "Poly":
        return cls({(): c})

    @classmethod
    def var(cls, i: int, j: int, k: int) -> "Poly":
        return cls({(((i, j, k), 1),): ONE})

    def __add__(self, other):
        other = other if isinstance(other, Poly) else Poly.const(other)
        d = dict(self.terms)
        for m, c in other.terms.items():
            d[m] = d.get(m, ZERO) + c
        return Poly(d)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = other if isinstance(other, Poly) else Poly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return Poly.const(other) - self

    def __mul__(self, other):
        other = other if isinstance(other, Poly) else Poly.const(other)
        d: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                d[m] = d.get(m, ZERO) + c1 * c2
        return Poly(d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = as_gaussian(other.constant_value() if isinstance(other, Poly) else other)
        return self * c.inverse()

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers of polynomials are not allowed")
        out = Poly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def constant_value(self):
        if any(m for m in self.terms):
            raise TypeError("polynomial is not constant")
        return self.terms.get((), ZERO)

    def degrees(self) -> set:
        return {sum(e for _, e in m) for m in self.terms}

    def variables(self) -> set:
        return {v for m in self.terms for v, _ in m}

    def evaluate(self, value) -> GaussianRational:
        """``value(i, j, k)`` supplies c(i, j, k)."""
        cache = {}
        acc = ZERO
        for mono, c in self.terms.items():
            t = c
            for v, e in mono:
                x = cache.get(v)
                if x is None:
                    x = cache[v] = value(*v)
                t = t * x**e
            acc = acc + t
        return acc

    def __str__(self):
        return format_poly_c(self)


def _mono_key(m: tuple):
    return (-sum(e for _, e in m), m)


def format_poly_c(p: Poly) -> str:
    if not p.terms:
        return "0"
    parts = []
    for mono in sorted(p.terms, key=_mono_key):
        c = p.terms[mono]
        factors = [f"c({i},{j},{k})" + (f"^{e}" if e != 1 else "") for (i, j, k), e in mono]
        neg = c.im == 0 and c.re < 0
        mag = -c if neg else c
        if not factors:
            body = format_gaussian(mag)
            if not (mag.im == 0 and mag.den == 1):
                body = f"({body})"
        elif mag == ONE:
            body = "*".join(factors)
        else:
            lit = format_gaussian(mag)
            if not (mag.im == 0 and mag.den == 1) and lit != "i":
                lit = f"({lit})"
            body = "*".join([lit] + factors)
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f" - {body}" if neg else f" + {body}")
    return "".join(parts)


@dataclass(frozen=True)
class PolyClause:
    lhs: Poly
    rhs: Poly

    @property
    def diff(self) -> Poly:
        return self.lhs - self.rhs

    def is_homogeneous(self) -> bool:
        """Every monomial of lhs - rhs has the same positive degree."""
        degs = self.diff.degrees()
        return len(degs) <= 1 and 0 not in degs

    def __str__(self):
        return f"{format_poly_c(self.lhs)} = {format_poly_c(self.rhs)}"


def check_homogeneous(clause: PolyClause) -> None:
    degs = clause.diff.degrees()
    if 0 in degs:
        raise NonHomogeneousClause(f"clause has a constant term: {clause}")


# ---------------------------------------------------------------------------
# condition sets


@dataclass(frozen=True)
class ConditionSet:
    label: str
    containments: tuple = ()
    polys: tuple = ()
    mode: ProductMode = ProductMode.ONE_SIDED
    rebase: tuple | None = None
    dim: int | None = None
    note: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "mode", ProductMode(self.mode))
        for c in self.polys:
            check_homogeneous(c)

    @property
    def clauses(self) -> tuple:
        return tuple(self.containments) + tuple(self.polys)

    def with_mode(self, mode) -> "ConditionSet":
        return ConditionSet(self.label, self.containments, self.polys, ProductMode(mode), self.rebase, self.dim, self.note)

    def with_rebase(self, rebase) -> "ConditionSet":
        return ConditionSet(self.label, self.containments, self.polys, self.mode, rebase, self.dim, self.note)

    def max_index(self) -> int:
        idx = [c.expr.max_index() for c in self.containments]
        idx += [c.bound - 1 for c in self.containments if c.bound is not None]
        idx += [max(v) for c in self.polys for v in c.diff.variables()]
        return max(idx, default=0)

    @property
    def rebase_is_permutation(self) -> bool:
        return self.rebase is not None and all(isinstance(r, int) for r in self.rebase)

    def rebase_matrix(self, n: int):
        """Rows are the new basis vectors E_i in e-coordinates."""
        if self.rebase is None:
            return None
        if self.rebase_is_permutation:
            return [[ONE if k == r - 1 else ZERO for k in range(n)] for r in self.rebase]
        return [[as_gaussian(x) for x in row] for row in self.rebase]


def _check_dims(A: Algebra, cs: ConditionSet) -> None:
    n = A.dim
    if cs.dim is not None and cs.dim != n:
        raise DimensionMismatch(f"condition set {cs.label} is for dimension {cs.dim}, algebra has {n}")
    if cs.rebase is not None:
        if cs.rebase_is_permutation:
            if len(cs.rebase) != n or sorted(cs.rebase) != list(range(1, n + 1)):
                raise DimensionMismatch(f"rebase of {cs.label} is not a permutation of 1..{n}")
        elif len(cs.rebase) != n or any(len(row) != n for row in cs.rebase):
            raise DimensionMismatch(f"rebase of {cs.label} is not an {n}x{n} matrix")
    if cs.max_index() > n:
        raise DimensionMismatch(f"condition set {cs.label} refers to indices beyond {n}")


def eval_conditions(A: Algebra, cs: ConditionSet, mode=None, apply_rebase: bool = True):
    """``(ok, failing)``: whether A satisfies cs, and the failing clauses."""
    _check_dims(A, cs)
    mode = ProductMode(mode) if mode is not None else cs.mode
    B = A
    if apply_rebase and cs.rebase is not None:
        B = change_basis(A, cs.rebase_matrix(A.dim))
    n = B.dim
    symmetric = mode is ProductMode.SYMMETRIC
    failing = []
    memo: dict = {}
    for cl in cs.containments:
        U = eval_subexpr(B, cl.expr, symmetric, memo)
        bound = n + 1 if cl.zero else cl.bound
        if not U.issubset(Subspace.flag(n, bound)):
            failing.append(str(cl))
    for cl in cs.polys:
        if cl.diff.evaluate(B.c):
            failing.append(str(cl))
    return not failing, failing


# ---------------------------------------------------------------------------
# modular screening
#
# Gaussian residues are pairs (re, im) of int64 arrays modulo PRIME.


def _gmul(a, b, p=PRIME):
    ar, ai = a
    br, bi = b
    return ((ar * br - ai * bi) % p, (ar * bi + ai * br) % p)


def _gsub(a, b, p=PRIME):
    return ((a[0] - b[0]) % p, (a[1] - b[1]) % p)


def _powmod(x: np.ndarray, e: int, p=PRIME) -> np.ndarray:
    result = np.ones_like(x)
    base = x % p
    while e:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


def _ginv(a, p=PRIME):
    ar, ai = a
    norm = (ar * ar + ai * ai) % p
    inv = _powmod(norm, p - 2, p)
    return (ar * inv % p, (-ai) * inv % p)


def _greduce(V, p=PRIME):
    """Row-space basis of a batch of vector lists, at most n rows each.

    V = (re, im), shape (T, m, n).  Returns the same shape with m = n;
    rows without a pivot are zero.
    """
    vr, vi = V[0].copy(), V[1].copy()
    T, m, n = vr.shape
    out_r = np.zeros((T, n, n), dtype=np.int64)
    out_i = np.zeros((T, n, n), dtype=np.int64)
    if m == 0:
        return out_r, out_i
    ar = np.arange(T)
    for col in range(n):
        nz = (vr[:, :, col] != 0) | (vi[:, :, col] != 0)
        has = nz.any(axis=1)
        if not has.any():
            continue
        idx = nz.argmax(axis=1)
        pr, pi = vr[ar, idx], vi[ar, idx]
        inv = _ginv((pr[:, col], pi[:, col]), p)
        pr, pi = _gmul((pr, pi), (inv[0][:, None], inv[1][:, None]), p)
        mask = has[:, None].astype(np.int64)
        pr, pi = pr * mask, pi * mask
        f = (vr[:, :, col][:, :, None], vi[:, :, col][:, :, None])
        sub = _gmul(f, (pr[:, None, :], pi[:, None, :]), p)
        vr, vi = _gsub((vr, vi), sub, p)
        out_r[:, col], out_i[:, col] = pr, pi
    return out_r, out_i


def _gprod(U, W, C, symmetric: bool, p=PRIME):
    """All products u*w (and w*u) of rows of U and W under tensor C."""
    Cr, Ci = C

    def one_side(X, Y):
        xr, xi = X
        yr, yi = Y
        # Z[t,u,b,k] = sum_a x[t,u,a] C[t,a,b,k]
        zr = (np.einsum("tua,tabk->tubk", xr, Cr) - np.einsum("tua,tabk->tubk", xi, Ci)) % p
        zi = (np.einsum("tua,tabk->tubk", xr, Ci) + np.einsum("tua,tabk->tubk", xi, Cr)) % p
        wr = (np.einsum("tvb,tubk->tuvk", yr, zr) - np.einsum("tvb,tubk->tuvk", yi, zi)) % p
        wi = (np.einsum("tvb,tubk->tuvk", yr, zi) + np.einsum("tvb,tubk->tuvk", yi, zr)) % p
        T, u, v, n = wr.shape
        return wr.reshape(T, u * v, n), wi.reshape(T, u * v, n)

    parts = [one_side(U, W)]
    if symmetric:
        parts.append(one_side(W, U))
    if len(parts) == 1:
        return parts[0]
    return np.concatenate([q[0] for q in parts], axis=1), np.concatenate([q[1] for q in parts], axis=1)


def _gsubexpr(e, C, n: int, T: int, symmetric: bool, memo: dict, p=PRIME):
    hit = memo.get(e)
    if hit is not None:
        return hit
    if isinstance(e, Flag):
        rows = max(n - e.index + 1, 0)
        re = np.zeros((T, rows, n), dtype=np.int64)
        for r in range(rows):
            re[:, r, e.index - 1 + r] = 1
        out = (re, np.zeros_like(re))
    elif isinstance(e, Sum):
        parts = [_gsubexpr(t, C, n, T, symmetric, memo, p) for t in e.terms]
        out = _greduce((np.concatenate([q[0] for q in parts], 1), np.concatenate([q[1] for q in parts], 1)), p)
    elif isinstance(e, Prod):
        L = _gsubexpr(e.left, C, n, T, symmetric, memo, p)
        R = _gsubexpr(e.right, C, n, T, symmetric, memo, p)
        out = _greduce(_gprod(L, R, C, symmetric, p), p)
    elif isinstance(e, Power):
        pows = [None, _gsubexpr(e.base, C, n, T, symmetric, memo, p)]
        for k in range(2, e.exp + 1):
            parts = [_gprod(pows[a], pows[k - a], C, symmetric, p) for a in range(1, k)]
            pows.append(
                _greduce((np.concatenate([q[0] for q in parts], 1), np.concatenate([q[1] for q in parts], 1)), p)
            )
        out = pows[e.exp]
    else:
        raise TypeError(f"not a subspace expression: {e!r}")
    memo[e] = out
    return out


def _integer_tensor(A: Algebra):
    """(re, im) int64 arrays of L * c modulo PRIME for a common denominator L."""
    n = A.dim
    L = 1
    for vec in A.table.values():
        for v in vec:
            if v:
                L = L * v.den // gcd(L, v.den)
    re = np.zeros((n, n, n), dtype=np.int64)
    im = np.zeros((n, n, n), dtype=np.int64)
    for (i, j), vec in A.table.items():
        for k, v in enumerate(vec):
            if v:
                f = L // v.den
                re[i, j, k] = (v.re * f) % PRIME
                im[i, j, k] = (v.im * f) % PRIME
    return re, im


def _poly_modp(poly: Poly):
    """Integer-scaled (coefficient pair, monomial) list of a polynomial."""
    L = 1
    for c in poly.terms.values():
        L = L * c.den // gcd(L, c.den)
    out = []
    for mono, c in poly.terms.items():
        f = L // c.den
        out.append(((c.re * f) % PRIME, (c.im * f) % PRIME, mono))
    return out


def screen_batch(A: Algebra, cs: ConditionSet, M: np.ndarray, mode=None) -> np.ndarray:
    """Boolean mask of candidate bases that may satisfy ``cs``.

    ``M`` holds integer basis matrices (rows are the new basis vectors),
    already composed with the set's rebase.  A False entry is a proof that
    the candidate fails (or is singular); True entries need an exact check.
    """
    mode = ProductMode(mode) if mode is not None else cs.mode
    symmetric = mode is ProductMode.SYMMETRIC
    T, n, _ = M.shape
    dets, adjs = kernels.adjugate_batch(M)
    ok = dets != 0
    cr, ci = _integer_tensor(A)
    Cr = kernels.rebase_modp(M, adjs, cr, PRIME)
    Ci = kernels.rebase_modp(M, adjs, ci, PRIME) if ci.any() else np.zeros_like(Cr)
    # polynomial clauses are cheap, so they go first
    for cl in cs.polys:
        if not cl.is_homogeneous():
            continue
        accr = np.zeros(T, dtype=np.int64)
        acci = np.zeros(T, dtype=np.int64)
        for c_re, c_im, mono in _poly_modp(cl.diff):
            tr = np.full(T, c_re, dtype=np.int64)
            ti = np.full(T, c_im, dtype=np.int64)
            for (i, j, k), e in mono:
                x = (Cr[:, i - 1, j - 1, k - 1], Ci[:, i - 1, j - 1, k - 1])
                for _ in range(e):
                    tr, ti = _gmul((tr, ti), x)
            accr = (accr + tr) % PRIME
            acci = (acci + ti) % PRIME
        ok &= (accr == 0) & (acci == 0)
    idx = np.nonzero(ok)[0]
    if not len(idx) or not cs.containments:
        return ok
    C = (Cr[idx], Ci[idx])
    sub = np.ones(len(idx), dtype=bool)
    memo: dict = {}
    for cl in cs.containments:
        U = _gsubexpr(cl.expr, C, n, len(idx), symmetric, memo)
        bound = n + 1 if cl.zero else cl.bound
        head = slice(0, bound - 1)
        sub &= ~((U[0][:, :, head] != 0).any(axis=(1, 2)) | (U[1][:, :, head] != 0).any(axis=(1, 2)))
    ok[idx] = sub
    return ok


# ---------------------------------------------------------------------------
# search


@dataclass
class SearchResult:
    found: bool
    basis: list | None = None
    trial: int | None = None
    trials: int = 0
    survivors: int = 0
    seed: int = 0


DEFAULT_MIX = (("upper", 0.35), ("lower", 0.35), ("full", 0.3))


def _candidates(rng: np.random.Generator, count: int, n: int, mix, entry: int, permute: float) -> np.ndarray:
    kinds = [k for k, _ in mix]
    weights = np.array([w for _, w in mix], dtype=float)
    weights /= weights.sum()
    choice = rng.choice(len(kinds), size=count, p=weights)
    M = rng.integers(-entry, entry + 1, size=(count, n, n))
    diag = rng.integers(1, entry + 1, size=(count, n)) * rng.choice([-1, 1], size=(count, n))
    iu = np.triu_indices(n, 1)
    il = np.tril_indices(n, -1)
    for t in range(count):
        kind = kinds[choice[t]]
        if kind == "upper":
            M[t][il] = 0
            M[t][np.diag_indices(n)] = diag[t]
        elif kind == "lower":
            M[t][iu] = 0
            M[t][np.diag_indices(n)] = diag[t]
    perm_mask = rng.random(count) < permute
    for t in np.nonzero(perm_mask)[0]:
        M[t] = M[t][rng.permutation(n)]
    return M.astype(np.int64)


def _integer_rebase(cs: ConditionSet, n: int):
    """The rebase as an int64 matrix, or None when it has non-integer entries."""
    M = cs.rebase_matrix(n)
    if M is None:
        return np.eye(n, dtype=np.int64)
    if any(x.den != 1 or x.im for row in M for x in row):
        return None
    return np.array([[x.re for x in row] for row in M], dtype=np.int64)


def search_basis(
    A: Algebra,
    cs: ConditionSet,
    trials: int = 1000,
    seed: int = 0,
    pool: Iterable = (),
    mode=None,
    mix=DEFAULT_MIX,
    entry: int = 2,
    permute: float = 0.3,
    batch: int = 2048,
) -> SearchResult:
    """Randomized search for P with eval_conditions(change_basis(A, P), cs).

    Trial 0 is the identity, followed by the matrices in ``pool``, then
    random triangular or full integer matrices.  The first exact success
    in trial order is returned, so results depend only on the arguments.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    _check_dims(A, cs)
    n = A.dim
    R = _integer_rebase(cs, n)
    fixed = [np.eye(n, dtype=np.int64)]
    for P in pool:
        fixed.append(np.array([[int(as_gaussian(x).real) for x in row] for row in P], dtype=np.int64))
    fixed = fixed[:trials]
    result = SearchResult(False, trials=trials, seed=seed)
    start = 0
    b = 0
    while start < trials:
        if start < len(fixed):
            P = np.stack(fixed)
        else:
            count = min(batch, trials - start)
            P = _candidates(np.random.default_rng([seed, b]), count, n, mix, entry, permute)
            b += 1
        if R is None:
            mask = np.ones(len(P), dtype=bool)
        else:
            mask = screen_batch(A, cs, np.einsum("ij,tjk->tik", R, P), mode)
        for t in np.nonzero(mask)[0]:
            result.survivors += 1
            basis = [[GaussianRational(int(x)) for x in row] for row in P[t]]
            ok, _ = eval_conditions(change_basis(A, basis), cs, mode)
            if ok:
                result.found = True
                result.basis = basis
                result.trial = start + int(t)
                return result
        start += len(P)
    return result
