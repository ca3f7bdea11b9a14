"""Parametric families of 2-step nilpotent algebras and component counts.

Matrices here are plain lists of rows.  Parameters may be any scalar the
tower accepts, including RatFunc values (used for parametric indices).
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Sequence

from .algebra import Algebra, DimensionMismatch, make_algebra
from .scalars import ONE, ZERO, as_gaussian

__all__ = [
    "Flavor",
    "ComponentDescriptor",
    "ComponentRange",
    "UnknownFamily",
    "ArityMismatch",
    "snk",
    "jordan",
    "skew_sum",
    "gamma",
    "block_diag",
    "frak_A",
    "algebra_from_matrices",
    "h_family",
    "v32",
    "a133",
    "null_filiform",
    "n2alpha",
    "n3alpha",
    "named_family",
    "FAMILIES",
    "component_range",
    "component_dim",
    "components",
    "sample_random",
]


class UnknownFamily(KeyError):
    pass


class ArityMismatch(ValueError):
    pass


class Flavor(str, enum.Enum):
    ALL = "all"
    COMMUTATIVE = "commutative"
    ANTICOMMUTATIVE = "anticommutative"

    @classmethod
    def parse(cls, value) -> "Flavor":
        if isinstance(value, cls):
            return value
        aliases = {"c": cls.COMMUTATIVE, "ac": cls.ANTICOMMUTATIVE, "comm": cls.COMMUTATIVE}
        v = str(value).lower()
        if v in aliases:
            return aliases[v]
        return cls(v)


def _scalar(x):
    # RatFunc parameters are allowed; plain numbers become GaussianRational
    try:
        return as_gaussian(x)
    except TypeError:
        return x


# ---------------------------------------------------------------------------
# S_{n,k}


def snk(n: int, k: int, coeffs, flavor=Flavor.ALL) -> Algebra:
    """e_i e_j = sum_p c[i][j][p] e_{n-k+p} for i, j <= n - k (0-based c).

    Commutative and anticommutative flavors average the tensor with its
    (i, j)-transpose, respectively its negative.
    """
    flavor = Flavor.parse(flavor)
    if not 0 <= k <= n:
        raise DimensionMismatch(f"need 0 <= k <= n, got n={n}, k={k}")
    m = n - k
    if len(coeffs) != m or any(len(row) != m for row in coeffs) or any(
        len(v) != k for row in coeffs for v in row
    ):
        raise DimensionMismatch(f"coefficient tensor must be {m} x {m} x {k}")
    half = Fraction(1, 2)
    entries = []
    for i in range(m):
        for j in range(m):
            for p in range(k):
                c = _scalar(coeffs[i][j][p])
                if flavor is Flavor.COMMUTATIVE:
                    c = (c + _scalar(coeffs[j][i][p])) * half
                elif flavor is Flavor.ANTICOMMUTATIVE:
                    c = (c - _scalar(coeffs[j][i][p])) * half
                if c:
                    entries.append((i + 1, j + 1, m + p + 1, c))
    return make_algebra(n, entries, label=f"S{n},{k}")


# ---------------------------------------------------------------------------
# congruence blocks


def _zeros(r: int, c: int):
    return [[ZERO] * c for _ in range(r)]


def jordan(k: int, lam=0):
    """Jordan block J_k(lam): lam on the diagonal, 1 just above it."""
    if k < 1:
        raise ValueError("block size must be >= 1")
    lam = _scalar(lam)
    M = _zeros(k, k)
    for i in range(k):
        M[i][i] = lam
        if i + 1 < k:
            M[i][i + 1] = ONE
    return M


def identity_matrix(k: int):
    M = _zeros(k, k)
    for i in range(k):
        M[i][i] = ONE
    return M


def skew_sum(A, B):
    """[A \\ B] = ((0, B), (A, 0))."""
    ra, ca = len(A), len(A[0]) if A else 0
    rb, cb = len(B), len(B[0]) if B else 0
    M = _zeros(rb + ra, ca + cb)
    for i in range(rb):
        for j in range(cb):
            M[i][ca + j] = _scalar(B[i][j])
    for i in range(ra):
        for j in range(ca):
            M[rb + i][j] = _scalar(A[i][j])
    return M


def gamma(k: int):
    """Gamma_k: a +-1 band along the anti-diagonal.

    The bottom row is (1, 1, 0, ...); moving up, each row holds a pair of
    equal entries one step to the right with alternating sign, and the top
    row keeps only its anti-diagonal entry.
    """
    if k < 1:
        raise ValueError("block size must be >= 1")
    M = _zeros(k, k)
    for r in range(k):
        # r counts rows from the bottom
        sign = ONE if r % 2 == 0 else -ONE
        row = k - 1 - r
        M[row][r] = sign
        if r + 1 < k:
            M[row][r + 1] = sign
    return M


def block_diag(*blocks):
    size = sum(len(b) for b in blocks)
    M = _zeros(size, size)
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, v in enumerate(row):
                M[off + i][off + j] = _scalar(v)
        off += len(b)
    return M


def frak_A(lambdas: Sequence, n: int):
    """diag([J_1(l_1) \\ I], ..., [J_1(l_t) \\ I]) with a trailing 1 for odd n."""
    if len(lambdas) != n // 2:
        raise ArityMismatch(f"need {n // 2} parameters for n={n}, got {len(lambdas)}")
    blocks = [skew_sum([[lam]], [[1]]) for lam in lambdas]
    if n % 2:
        blocks.append([[ONE]])
    return block_diag(*blocks)


def algebra_from_matrices(mats, label: str | None = None) -> Algebra:
    """Dimension d + m algebra with e_i e_j = sum_p mats[p][i][j] e_{d+p}."""
    if not mats:
        raise DimensionMismatch("need at least one matrix")
    d = len(mats[0])
    for M in mats:
        if len(M) != d or any(len(r) != d for r in M):
            raise DimensionMismatch("matrices must be square of equal size")
    entries = []
    for p, M in enumerate(mats):
        for i in range(d):
            for j in range(d):
                v = _scalar(M[i][j])
                if v:
                    entries.append((i + 1, j + 1, d + p + 1, v))
    return make_algebra(d + len(mats), entries, label=label)


# ---------------------------------------------------------------------------
# named families


def h_family(n: int, lambdas: Sequence) -> Algebra:
    """H(l_1, ..., l_{n//2}): the (n+1)-dimensional algebra of frak_A(n)."""
    return algebra_from_matrices([frak_A(lambdas, n)], label="h").relabel(
        "h", params=tuple((f"l{i + 1}", v) for i, v in enumerate(lambdas))
    )


def v32(l, m1, m2, m3, m4, m5, m6, m7) -> Algebra:
    A = [[1, 0, 0], [0, 0, 1], [0, l, 0]]
    B = [[0, m1, m2], [m3, m4, m5], [m6, m7, 1]]
    params = (("l", l),) + tuple((f"m{i + 1}", v) for i, v in enumerate((m1, m2, m3, m4, m5, m6, m7)))
    return algebra_from_matrices([A, B]).relabel("v32", params)


def a133(l) -> Algebra:
    l = _scalar(l)
    return make_algebra(
        5, [(1, 1, 3, 1), (1, 1, 5, l), (1, 2, 3, 1), (2, 1, 4, 1), (2, 2, 5, 1)], "a133", (("l", l),)
    )


def null_filiform(n: int) -> Algebra:
    if n < 1:
        raise ValueError("dimension must be >= 1")
    entries = [(i, j, i + j, 1) for i in range(1, n + 1) for j in range(1, n + 1) if i + j <= n]
    return make_algebra(n, entries, f"mu0^{n}", (("n", n),))


def n2alpha(a) -> Algebra:
    a = _scalar(a)
    return make_algebra(4, [(1, 1, 3, 1), (1, 2, 4, 1), (2, 1, 3, -a), (2, 2, 4, -1)], "n2", (("a", a),))


def n3alpha(a) -> Algebra:
    a = _scalar(a)
    return make_algebra(
        4, [(1, 1, 4, 1), (1, 2, 4, a), (2, 1, 4, -a), (2, 2, 4, 1), (3, 3, 4, 1)], "n3", (("a", a),)
    )


@dataclass(frozen=True)
class FamilySpec:
    name: str
    params: tuple
    build: object
    doc: str = ""

    def __call__(self, **kw) -> Algebra:
        return self.build(**kw)


def _h_from_kw(**kw):
    n = int(as_gaussian(kw.pop("n")).real)
    lams = [kw.pop(f"l{i + 1}") for i in range(n // 2)]
    if kw:
        raise ArityMismatch(f"unexpected parameters for h: {sorted(kw)}")
    return h_family(n, lams)


FAMILIES = {
    "h": FamilySpec("h", ("n", "l1", "..."), _h_from_kw, "H(l1..l_{n//2}) of dimension n+1"),
    "v32": FamilySpec("v32", ("l", "m1", "m2", "m3", "m4", "m5", "m6", "m7"), v32, "<<A:B>> family"),
    "a133": FamilySpec("a133", ("l",), a133, "A133(l)"),
    "mu0": FamilySpec("mu0", ("n",), lambda n: null_filiform(int(as_gaussian(n).real)), "null-filiform"),
    "n2": FamilySpec("n2", ("a",), n2alpha, "N2(a), dimension 4"),
    "n3": FamilySpec("n3", ("a",), n3alpha, "N3(a), dimension 4"),
}


def named_family(name: str, params: dict | None = None) -> Algebra:
    params = dict(params or {})
    if name == "snk":
        return sample_random(
            int(params.pop("n")), int(params.pop("k")), params.pop("flavor", "all"), int(params.pop("seed", 0))
        )
    spec = FAMILIES.get(name)
    if spec is None:
        raise UnknownFamily(name)
    if name != "h":
        want = set(spec.params)
        if set(params) != want:
            raise ArityMismatch(f"{name} expects parameters {sorted(want)}, got {sorted(params)}")
    elif "n" not in params:
        raise ArityMismatch("h expects n and l1..l_{n//2}")
    try:
        return spec(**params)
    except TypeError as exc:
        raise ArityMismatch(str(exc)) from None


# ---------------------------------------------------------------------------
# component dimensions of S(n,k)


def _floor_half_minus_sqrt(a: int, m: int) -> int:
    """floor((a - sqrt(m)) / 2) exactly."""
    r = isqrt(m)
    if r * r == m:
        return (a - r) // 2
    return (a - r - 1) // 2


def _direct_bound(n: int, k: int, flavor: Flavor) -> bool:
    m = n - k
    if flavor is Flavor.ALL:
        return k <= m * m
    if flavor is Flavor.COMMUTATIVE:
        return k <= m * (m + 1) // 2
    return k <= m * (m - 1) // 2


@dataclass(frozen=True)
class ComponentRange:
    """Admissible k from the closed-form bounds, with a cross-check.

    ``direct`` lists k >= 1 with k at most the number of independent
    products; ``reconciled`` removes k = 1 for even-dimensional
    anticommutative algebras (a skew form of odd size is degenerate).
    ``inconsistent`` is set when the formula disagrees with the reconciled
    list, or when it is empty although nonzero algebras exist.
    """

    n: int
    flavor: Flavor
    ks: tuple
    lower: int
    upper: int
    direct: tuple
    reconciled: tuple
    inconsistent: bool

    def __iter__(self):
        return iter(self.ks)

    def __len__(self):
        return len(self.ks)


def component_range(n: int, flavor=Flavor.ALL) -> ComponentRange:
    flavor = Flavor.parse(flavor)
    if n < 1:
        raise ValueError("n must be >= 1")
    if flavor is Flavor.ALL:
        lower, upper = 1, _floor_half_minus_sqrt(2 * n + 1, 4 * n + 1)
    elif flavor is Flavor.COMMUTATIVE:
        lower, upper = 1, _floor_half_minus_sqrt(2 * n + 3, 8 * n + 9)
    else:
        lower, upper = 1 + (n + 1) % 2, _floor_half_minus_sqrt(2 * n + 1, 8 * n + 1)
    ks = tuple(range(lower, upper + 1))
    direct = tuple(k for k in range(1, n + 1) if _direct_bound(n, k, flavor))
    reconciled = direct
    if flavor is Flavor.ANTICOMMUTATIVE and n % 2 == 0:
        reconciled = tuple(k for k in direct if k != 1)
    inconsistent = ks != reconciled or (not ks and bool(direct))
    return ComponentRange(n, flavor, ks, lower, upper, direct, reconciled, inconsistent)


def component_dim(n: int, k: int, flavor=Flavor.ALL) -> int:
    flavor = Flavor.parse(flavor)
    m = n - k
    if flavor is Flavor.ALL:
        return m * m * k + m * k
    if flavor is Flavor.COMMUTATIVE:
        return m * (m + 1) // 2 * k + m * k
    return m * (m - 1) // 2 * k + m * k


@dataclass(frozen=True)
class ComponentDescriptor:
    n: int
    k: int
    flavor: Flavor
    dim: int


@dataclass(frozen=True)
class ComponentReport:
    range: ComponentRange
    components: tuple = field(default_factory=tuple)

    @property
    def variety_dim(self) -> int:
        return max((c.dim for c in self.components), default=0)


def components(n: int, flavor=Flavor.ALL) -> ComponentReport:
    rng = component_range(n, flavor)
    comps = tuple(ComponentDescriptor(n, k, rng.flavor, component_dim(n, k, rng.flavor)) for k in rng.ks)
    return ComponentReport(rng, comps)


# ---------------------------------------------------------------------------
# random samples


def sample_random(n: int, k: int, flavor=Flavor.ALL, seed: int = 0, lo: int = -10, hi: int = 10) -> Algebra:
    """Seeded sample of S_{n,k} in the given flavor, integer coefficients in [lo, hi]."""
    flavor = Flavor.parse(flavor)
    if not 0 <= k <= n:
        raise DimensionMismatch(f"need 0 <= k <= n, got n={n}, k={k}")
    rng = random.Random(seed)
    m = n - k
    c = [[[0] * k for _ in range(m)] for _ in range(m)]
    for i in range(m):
        for j in range(m):
            if flavor is Flavor.COMMUTATIVE and j < i:
                continue
            if flavor is Flavor.ANTICOMMUTATIVE and j <= i:
                continue
            for p in range(k):
                v = rng.randint(lo, hi)
                c[i][j][p] = v
                if flavor is Flavor.COMMUTATIVE:
                    c[j][i][p] = v
                elif flavor is Flavor.ANTICOMMUTATIVE:
                    c[j][i][p] = -v
    A = snk(n, k, c, flavor)
    return A.relabel(f"snk({n},{k},{flavor.value},seed={seed})")
