"""Structure-constant algebras, subspaces, and isomorphism invariants.

Basis indices in the public API are 1-based (``e1 .. en``) to match how
multiplication tables are written; storage is 0-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .linalg import SingularMatrix, det, inverse, nullspace, rank_gaussian_sparse, rref
from .scalars import ONE, ZERO, GaussianRational, RatFunc, as_gaussian, as_ratfunc

__all__ = [
    "Algebra",
    "Subspace",
    "Fingerprint",
    "IndexOutOfRange",
    "DimensionMismatch",
    "PreconditionViolated",
    "SingularMatrix",
    "make_algebra",
    "zero_algebra",
    "multiply",
    "change_basis",
    "subspace_product",
    "square",
    "annihilator",
    "power",
    "nil_index",
    "classify",
    "derivation_dim",
    "orbit_dim",
    "projection_matrices",
    "in_Unk",
    "fingerprint",
    "INF",
]

INF = math.inf


class IndexOutOfRange(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


class PreconditionViolated(ValueError):
    pass


def _canon(x):
    """Constants are kept as GaussianRational so concrete algebras stay cheap."""
    if isinstance(x, RatFunc):
        c = x.constant_value()
        return c if c is not None else x
    return as_gaussian(x)


class Algebra:
    """An n-dimensional algebra given by structure constants c_ij^k.

    ``table`` maps 0-based ``(i, j)`` to a length-n tuple of coefficients of
    e_i e_j; pairs with zero product are absent.  Coefficients are
    GaussianRational, or RatFunc when they genuinely depend on s.
    """

    __slots__ = ("dim", "table", "label", "params", "_concrete", "_hash")

    def __init__(self, dim: int, table=None, label: str | None = None, params=()):
        if dim < 0:
            raise ValueError("dimension must be non-negative")
        self.dim = dim
        clean = {}
        concrete = True
        for (i, j), vec in (table or {}).items():
            if not (0 <= i < dim and 0 <= j < dim) or len(vec) != dim:
                raise IndexOutOfRange(f"product e{i + 1} e{j + 1} out of range for dim {dim}")
            vec = tuple(_canon(v) for v in vec)
            if any(vec):
                clean[(i, j)] = vec
                if concrete and any(isinstance(v, RatFunc) for v in vec):
                    concrete = False
        self.table = clean
        self.label = label
        self.params = tuple(params)
        self._concrete = concrete
        self._hash = None

    # -- access
    @property
    def n(self) -> int:
        return self.dim

    def is_concrete(self) -> bool:
        return self._concrete

    def product(self, i: int, j: int):
        """Coefficient vector of e_i e_j (0-based)."""
        return self.table.get((i, j)) or (ZERO,) * self.dim

    def c(self, i: int, j: int, k: int):
        """Structure constant c_ij^k with 1-based indices."""
        for x in (i, j, k):
            if not 1 <= x <= self.dim:
                raise IndexOutOfRange(f"index {x} out of range 1..{self.dim}")
        vec = self.table.get((i - 1, j - 1))
        return vec[k - 1] if vec else ZERO

    def entries(self):
        """Nonzero ``(i, j, k, value)`` with 1-based indices, sorted."""
        out = []
        for (i, j) in sorted(self.table):
            for k, v in enumerate(self.table[(i, j)]):
                if v:
                    out.append((i + 1, j + 1, k + 1, v))
        return out

    def __eq__(self, other):
        if not isinstance(other, Algebra):
            return NotImplemented
        return self.dim == other.dim and self.table == other.table

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.dim, frozenset(self.table.items())))
        return self._hash

    def __repr__(self):
        name = self.label or "Algebra"
        return f"<{name}: dim {self.dim}, {len(self.table)} nonzero products>"

    def __str__(self):
        from .dsl import format_products

        return format_products(self)

    # -- derived algebras
    def relabel(self, label: str | None, params=None) -> "Algebra":
        return Algebra(self.dim, self.table, label, self.params if params is None else params)

    def pad_to(self, m: int) -> "Algebra":
        """Append zero-multiplying basis vectors up to dimension m."""
        if m < self.dim:
            raise DimensionMismatch(f"cannot pad dim {self.dim} down to {m}")
        pad = (ZERO,) * (m - self.dim)
        table = {ij: vec + pad for ij, vec in self.table.items()}
        return Algebra(m, table, self.label, self.params)

    def evaluate(self, s) -> "Algebra":
        """Substitute a value for s in every coefficient."""
        table = {}
        for ij, vec in self.table.items():
            table[ij] = tuple(v.eval_at(s) if isinstance(v, RatFunc) else v for v in vec)
        return Algebra(self.dim, table, self.label, self.params)

    def scaled(self, c) -> "Algebra":
        table = {ij: tuple(v * c for v in vec) for ij, vec in self.table.items()}
        return Algebra(self.dim, table, self.label, self.params)


def make_algebra(n: int, entries: Iterable, label: str | None = None, params=()) -> Algebra:
    """Algebra from ``(i, j, k, value)`` entries, 1-based; duplicates are summed."""
    acc: dict = {}
    for i, j, k, v in entries:
        for x in (i, j, k):
            if not (isinstance(x, int) and 1 <= x <= n):
                raise IndexOutOfRange(f"index {x} out of range 1..{n}")
        vec = acc.setdefault((i - 1, j - 1), [ZERO] * n)
        vec[k - 1] = vec[k - 1] + v
    return Algebra(n, {ij: tuple(vec) for ij, vec in acc.items()}, label, params)


def zero_algebra(n: int) -> Algebra:
    return Algebra(n, {}, label=f"zero{n}")


def _zero_like(A: Algebra):
    return ZERO


def multiply(A: Algebra, x: Sequence, y: Sequence):
    """Bilinear product of coordinate vectors."""
    n = A.dim
    if len(x) != n or len(y) != n:
        raise DimensionMismatch("vector length does not match algebra dimension")
    out = [ZERO] * n
    for (i, j), vec in A.table.items():
        xi = x[i]
        if not xi:
            continue
        yj = y[j]
        if not yj:
            continue
        f = xi * yj
        for k, v in enumerate(vec):
            if v:
                out[k] = out[k] + f * v
    return tuple(out)


def change_basis(A: Algebra, P, label: str | None = None) -> Algebra:
    """Structure constants in the basis E_i = sum_j P[i][j] e_j.

    c'_ij^k = sum_{p,q,r} P_ip P_jq c_pq^r (P^-1)_rk.
    """
    n = A.dim
    if len(P) != n or any(len(r) != n for r in P):
        raise DimensionMismatch("basis matrix must be n x n")
    P = [[_canon(x) for x in row] for row in P]
    if not det(P):
        raise SingularMatrix("basis change matrix is singular")
    Pinv = inverse(P)
    table = {}
    for i in range(n):
        for j in range(n):
            v = multiply(A, P[i], P[j])
            if not any(v):
                continue
            w = []
            for k in range(n):
                s = ZERO
                for r in range(n):
                    if v[r] and Pinv[r][k]:
                        s = s + v[r] * Pinv[r][k]
                w.append(s)
            table[(i, j)] = tuple(w)
    return Algebra(n, table, label if label is not None else A.label, A.params)


# ---------------------------------------------------------------------------
# subspaces


class Subspace:
    """Row-reduced basis of a subspace of the ambient coordinate space."""

    __slots__ = ("ambient", "basis", "pivots")

    def __init__(self, ambient: int, vectors: Iterable = ()):
        vecs = [tuple(_canon(x) for x in v) for v in vectors]
        for v in vecs:
            if len(v) != ambient:
                raise DimensionMismatch("vector length does not match ambient dimension")
        vecs = [v for v in vecs if any(v)]
        R, piv = rref(vecs) if vecs else ([], [])
        self.ambient = ambient
        self.basis = tuple(tuple(r) for r in R)
        self.pivots = tuple(piv)

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n)

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls.flag(n, 1)

    @classmethod
    def flag(cls, n: int, i: int) -> "Subspace":
        """<e_i, ..., e_n> (1-based); empty when i > n."""
        return cls(n, [tuple(ONE if k == m else ZERO for k in range(n)) for m in range(i - 1, n)])

    @classmethod
    def span_of(cls, n: int, indices: Iterable[int]) -> "Subspace":
        """Span of basis vectors e_k for the given 1-based indices."""
        return cls(n, [tuple(ONE if k == m - 1 else ZERO for k in range(n)) for m in indices])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def contains(self, v) -> bool:
        v = list(_canon(x) for x in v)
        for row, p in zip(self.basis, self.pivots):
            f = v[p]
            if f:
                v = [a - f * b if b else a for a, b in zip(v, row)]
        return not any(v)

    def __contains__(self, v):
        return self.contains(v)

    def issubset(self, other: "Subspace") -> bool:
        return all(other.contains(v) for v in self.basis)

    __le__ = issubset

    def __add__(self, other: "Subspace") -> "Subspace":
        if self.ambient != other.ambient:
            raise DimensionMismatch("ambient dimensions differ")
        return Subspace(self.ambient, self.basis + other.basis)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient, self.basis))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient})"


def _products(A: Algebra, U: Subspace, V: Subspace, symmetric: bool):
    vecs = []
    for u in U.basis:
        for v in V.basis:
            vecs.append(multiply(A, u, v))
            if symmetric:
                vecs.append(multiply(A, v, u))
    return vecs


def subspace_product(A: Algebra, U: Subspace, V: Subspace, symmetric: bool = False) -> Subspace:
    """span{uv : u in U, v in V}; with ``symmetric`` also the vu products."""
    if U.ambient != A.dim or V.ambient != A.dim:
        raise DimensionMismatch("subspace ambient dimension differs from algebra")
    return Subspace(A.dim, _products(A, U, V, symmetric))


def square(A: Algebra) -> Subspace:
    n = A.dim
    return Subspace(n, A.table.values())


def annihilator(A: Algebra) -> Subspace:
    """Two-sided annihilator {x : x e_i = e_i x = 0 for all i}."""
    n = A.dim
    rows = []
    for i in range(n):
        for k in range(n):
            # (x e_i)_k = sum_j x_j c_ji^k ; (e_i x)_k = sum_j x_j c_ij^k
            left = [A.product(j, i)[k] for j in range(n)]
            right = [A.product(i, j)[k] for j in range(n)]
            if any(left):
                rows.append(left)
            if any(right):
                rows.append(right)
    return Subspace(n, nullspace(rows, n))


def power(A: Algebra, U: Subspace, m: int, symmetric: bool = False) -> Subspace:
    """U^m with U^1 = U and U^m = sum_{a+b=m} U^a U^b."""
    if m < 1:
        raise ValueError("power must be >= 1")
    pows = [None, U]
    for k in range(2, m + 1):
        acc = Subspace(A.dim)
        for a in range(1, k):
            acc = acc + subspace_product(A, pows[a], pows[k - a], symmetric)
        pows.append(acc)
    return pows[m]


def nil_index(A: Algebra):
    """Least m with A^m = 0; ``INF`` once the power chain stalls above zero."""
    n = A.dim
    pows = [None, Subspace.full(n)]
    m = 1
    while True:
        if pows[m].is_zero():
            return m
        m += 1
        acc = Subspace(n)
        for a in range(1, m):
            acc = acc + subspace_product(A, pows[a], pows[m - a])
        pows.append(acc)
        if acc == pows[m - 1] and not acc.is_zero():
            return INF


@dataclass(frozen=True)
class Flags:
    commutative: bool
    anticommutative: bool
    associative: bool
    two_step_nilpotent: bool


def classify(A: Algebra) -> Flags:
    n = A.dim
    comm = all(A.product(i, j) == A.product(j, i) for i in range(n) for j in range(i + 1, n))
    anti = all(not any(A.product(i, i)) for i in range(n)) and all(
        all(a == -b for a, b in zip(A.product(i, j), A.product(j, i)))
        for i in range(n)
        for j in range(i + 1, n)
    )
    basis = [tuple(ONE if k == m else ZERO for k in range(n)) for m in range(n)]
    assoc = True
    two_step = True
    for i in range(n):
        for j in range(n):
            ij = A.product(i, j)
            for k in range(n):
                left = multiply(A, ij, basis[k])
                right = multiply(A, basis[i], A.product(j, k))
                if left != right:
                    assoc = False
                if any(left) or any(right):
                    two_step = False
            if not assoc and not two_step:
                break
    return Flags(comm, anti, assoc, two_step)


def derivation_equations(A: Algebra):
    """Sparse rows of the Leibniz system over unknowns d_kl (index k*n + l).

    D(e_i) = sum_p d_ip e_p; for each (i, j, l):
    sum_k c_ij^k d_kl - sum_p d_ip c_pj^l - sum_q d_jq c_iq^l = 0.
    """
    n = A.dim
    rows = []
    for i in range(n):
        for j in range(n):
            cij = A.product(i, j)
            for l in range(n):
                row: dict = {}
                for k in range(n):
                    v = cij[k]
                    if v:
                        col = k * n + l
                        row[col] = row.get(col, ZERO) + v
                for p in range(n):
                    v = A.product(p, j)[l]
                    if v:
                        col = i * n + p
                        row[col] = row.get(col, ZERO) - v
                for q in range(n):
                    v = A.product(i, q)[l]
                    if v:
                        col = j * n + q
                        row[col] = row.get(col, ZERO) - v
                row = {c: v for c, v in row.items() if v}
                if row:
                    rows.append(row)
    return rows


def derivation_dim(A: Algebra) -> int:
    if not A.is_concrete():
        raise PreconditionViolated("derivation_dim needs a concrete algebra")
    n = A.dim
    return n * n - rank_gaussian_sparse(derivation_equations(A), n * n)


def orbit_dim(A: Algebra) -> int:
    return A.dim * A.dim - derivation_dim(A)


def projection_matrices(A: Algebra, complement: Sequence[int]):
    """Matrices of proj_{e_p} o mu on the complement, one per square direction.

    ``complement`` lists the 1-based indices spanning a complement of A^2;
    the remaining indices (in increasing order) must span A^2 exactly.
    """
    n = A.dim
    comp = sorted(complement)
    rest = [m for m in range(1, n + 1) if m not in comp]
    sq = square(A)
    if sq != Subspace.span_of(n, rest):
        raise PreconditionViolated("A^2 is not spanned by the non-complement basis vectors")
    mats = []
    for p in rest:
        mats.append([[A.c(i, j, p) for j in comp] for i in comp])
    return mats


def in_Unk(A: Algebra, k: int) -> bool:
    """Membership in U_{n,k}: 2-step nilpotent with dim A^2 = dim ann A = k."""
    if not classify(A).two_step_nilpotent:
        return False
    return square(A).dim == k and annihilator(A).dim == k


@dataclass(frozen=True)
class Fingerprint:
    dim: int
    dim_square: int
    dim_annihilator: int
    nil_index: float
    dim_der: int
    commutative: bool
    anticommutative: bool
    associative: bool
    two_step_nilpotent: bool

    @property
    def orbit_dim(self) -> int:
        return self.dim * self.dim - self.dim_der

    def as_dict(self) -> dict:
        ni = self.nil_index
        return {
            "dim": self.dim,
            "dim_square": self.dim_square,
            "dim_annihilator": self.dim_annihilator,
            "nil_index": None if ni == INF else int(ni),
            "dim_der": self.dim_der,
            "orbit_dim": self.orbit_dim,
            "commutative": self.commutative,
            "anticommutative": self.anticommutative,
            "associative": self.associative,
            "two_step_nilpotent": self.two_step_nilpotent,
        }


def fingerprint(A: Algebra) -> Fingerprint:
    f = classify(A)
    return Fingerprint(
        dim=A.dim,
        dim_square=square(A).dim,
        dim_annihilator=annihilator(A).dim,
        nil_index=nil_index(A),
        dim_der=derivation_dim(A),
        commutative=f.commutative,
        anticommutative=f.anticommutative,
        associative=f.associative,
        two_step_nilpotent=f.two_step_nilpotent,
    )
