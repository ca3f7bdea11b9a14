"""Verification of degeneration witnesses given by parametric bases.

A witness names a source algebra (optionally with a parametric index), a
target, a substitution t = t(s), a limit point s0 and a basis E_1..E_n
whose coordinates are rational functions of t and s.  Rebasing happens
exactly over Q(i)(s); the limit at s0 must equal the target tensor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from .algebra import (
    Algebra,
    DimensionMismatch,
    annihilator,
    derivation_dim,
    square,
)
from .linalg import poly_adjugate, poly_det
from .scalars import (
    ONE,
    ZERO,
    GaussianRational,
    PoleError,
    RatFunc,
    UniPoly,
    ZeroDivision,
    as_gaussian,
    as_ratfunc,
    poly_gcd,
)
from .syntax import Expr, Num, UnboundParameter, Var

__all__ = [
    "SingularBasis",
    "ParametricBasis",
    "DegenerationWitness",
    "Check",
    "VerificationReport",
    "BatteryReport",
    "parametric_constants",
    "limit_tensor",
    "verify_witness",
    "necessary_battery",
    "scale_witness",
]


class SingularBasis(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# parametric rebasing


def _lcm(a: UniPoly, b: UniPoly) -> UniPoly:
    if a.degree == 0:
        return b.monic()
    if b.degree == 0:
        return a.monic()
    return (a * b).exact_div(poly_gcd(a, b)).monic()


def parametric_constants(A: Algebra, P: Sequence[Sequence]) -> dict:
    """Structure constants of A in the basis E_i = sum_j P[i][j] e_j.

    Returns ``{(i, j): (c'_ij^1, ..., c'_ij^n)}`` over Q(i)(s), 0-based,
    with zero products omitted.  With P = Q / D for a polynomial matrix Q
    and A = C / dC, c' = (Q Q C adj Q) / (D dC det Q), so each entry costs
    one gcd.
    """
    n = A.dim
    if len(P) != n or any(len(r) != n for r in P):
        raise DimensionMismatch("basis matrix must be n x n")
    P = [[as_ratfunc(x) for x in row] for row in P]
    D = UniPoly.constant(1)
    for row in P:
        for x in row:
            D = _lcm(D, x.den)
    Q = [[(x.num * D.exact_div(x.den)) if x else UniPoly(()) for x in row] for row in P]
    detQ = poly_det(Q)
    if not detQ:
        raise SingularBasis("parametric basis is singular for every s")
    adjQ = poly_adjugate(Q)

    dC = UniPoly.constant(1)
    entries = {}
    for (p, q), vec in A.table.items():
        for r, v in enumerate(vec):
            if v:
                v = as_ratfunc(v)
                entries[(p, q, r)] = v
                dC = _lcm(dC, v.den)
    Cnum = {key: v.num * dC.exact_div(v.den) for key, v in entries.items()}

    # V[i][j][r] = sum_{p,q} Q_ip Q_jq C_pq^r
    zero = UniPoly(())
    V = {}
    for (p, q, r), c in Cnum.items():
        for i in range(n):
            qi = Q[i][p]
            if not qi:
                continue
            qc = qi * c
            for j in range(n):
                qj = Q[j][q]
                if not qj:
                    continue
                key = (i, j, r)
                V[key] = V.get(key, zero) + qc * qj
    denom = D * dC * detQ
    out = {}
    for i in range(n):
        for j in range(n):
            vec = []
            nonzero = False
            for k in range(n):
                acc = zero
                for r in range(n):
                    v = V.get((i, j, r))
                    if v and adjQ[r][k]:
                        acc = acc + v * adjQ[r][k]
                if acc:
                    vec.append(RatFunc(acc, denom))
                    nonzero = True
                else:
                    vec.append(RatFunc.const(0))
            if nonzero:
                out[(i, j)] = tuple(vec)
    return out


def limit_tensor(tensor: Mapping, n: int, s0, label: str | None = None) -> Algebra:
    """Entrywise limit at s0; PoleError names the first offending entry."""
    s0 = as_gaussian(s0)
    table = {}
    for (i, j) in sorted(tensor):
        vec = []
        for k, v in enumerate(tensor[(i, j)]):
            try:
                vec.append(as_ratfunc(v).limit_at(s0))
            except PoleError as exc:
                raise PoleError(
                    f"c({i + 1},{j + 1},{k + 1}) = {v} has no finite limit at s = {s0}", where=(i + 1, j + 1, k + 1)
                ) from exc
        table[(i, j)] = tuple(vec)
    return Algebra(n, table, label)


# ---------------------------------------------------------------------------
# witnesses


@dataclass(frozen=True)
class ParametricBasis:
    """Rows are E_i in e-coordinates; entries are expressions in t, s and parameters."""

    rows: tuple
    subst: Expr = Var("s")
    point: Expr = Num(ZERO)

    @property
    def n(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class DegenerationWitness:
    label: str
    source: str
    target: str
    basis: ParametricBasis
    source_params: tuple = ()  # ((name, Expr in t / parameters), ...)
    target_params: tuple = ()
    params: tuple = ()  # free parameters shared by source, target and basis
    exclusions: tuple = ()  # expressions in the parameters that must not vanish
    note: str = ""

    @property
    def dim(self) -> int:
        return self.basis.n


@dataclass
class Check:
    name: str
    status: str
    detail: str = ""

    def as_dict(self) -> dict:
        return {"name": self.name, "status": self.status, "detail": self.detail}


@dataclass
class VerificationReport:
    witness: str
    status: str
    checks: list = field(default_factory=list)
    limit: Algebra | None = None
    params: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def as_dict(self) -> dict:
        from .dsl import format_products

        d = {
            "witness": self.witness,
            "status": self.status,
            "checks": [c.as_dict() for c in self.checks],
        }
        if self.params:
            d["params"] = {k: str(v) for k, v in self.params.items()}
        if self.limit is not None:
            d["limit"] = format_products(self.limit)
        return d


Resolver = Callable[[str, Mapping], Algebra]


def _default_resolver(name: str, params: Mapping) -> Algebra:
    from .catalog import catalog_get

    return catalog_get(name, params)


_GENERIC_POINTS = (
    GaussianRational(3, 0, 7),
    GaussianRational(-5, 0, 11),
    GaussianRational(13, 0, 17),
    GaussianRational(2, 1, 9),
    GaussianRational(-7, 3, 19),
    GaussianRational(23, 0, 29),
)


def _eval_params(pairs, env) -> dict:
    return {name: expr.evaluate(env) for name, expr in pairs}


def verify_witness(
    w: DegenerationWitness,
    params: Mapping | None = None,
    resolve: Resolver | None = None,
    battery: bool = True,
) -> VerificationReport:
    """Run the checks in order; the first failure ends the run."""
    resolve = resolve or _default_resolver
    params = {k: as_gaussian(v) for k, v in (params or {}).items()}
    report = VerificationReport(w.label, "fail", params=dict(params))
    checks = report.checks
    n = w.dim

    missing = [p for p in w.params if p not in params]
    if missing:
        checks.append(Check("parameters", "fail", f"unbound parameters: {', '.join(missing)}"))
        return report
    for ex in w.exclusions:
        try:
            v = ex.evaluate(params)
        except (UnboundParameter, ZeroDivision) as exc:
            checks.append(Check("parameters", "fail", f"cannot evaluate exclusion {ex}: {exc}"))
            return report
        if not v:
            checks.append(Check("parameters", "fail", f"excluded parameter value: {ex} = 0"))
            return report

    s = RatFunc.s()
    try:
        t = as_ratfunc(w.basis.subst.evaluate({**params, "s": s}))
        s0 = as_gaussian(w.basis.point.evaluate(params))
        t0 = t.eval_at(s0)
    except (UnboundParameter, ZeroDivision, PoleError, TypeError) as exc:
        checks.append(Check("substitution", "fail", str(exc)))
        return report
    if t.is_constant() or t0:
        checks.append(Check("substitution", "fail", f"need non-constant t(s) with t(s0) = 0; t(s0) = {t0}"))
        return report
    env = {**params, "s": s, "t": t}

    # (b) parametric index
    try:
        src_params = _eval_params(w.source_params, env)
        source = resolve(w.source, src_params)
        tgt_params = _eval_params(w.target_params, params)
        target = resolve(w.target, tgt_params)
        if source.dim < n:
            source = source.pad_to(n)
        if target.dim < n:
            target = target.pad_to(n)
        if source.dim != n or target.dim != n:
            raise DimensionMismatch(f"source dim {source.dim}, target dim {target.dim}, basis size {n}")
        if not target.is_concrete():
            raise DimensionMismatch("target must not depend on s")
    except Exception as exc:  # noqa: BLE001 - reported, never thrown
        checks.append(Check("parametric-index", "fail", f"{type(exc).__name__}: {exc}"))
        return report
    detail = ", ".join(f"{k} = {v}" for k, v in src_params.items()) or "no parametric index"
    checks.append(Check("parametric-index", "pass", detail))

    # (a) invertibility
    try:
        rows = []
        for row in w.basis.rows:
            rows.append([as_ratfunc(e.evaluate(env)) for e in row])
        tensor = parametric_constants(source, rows)
    except SingularBasis as exc:
        checks.insert(0, Check("invertibility", "fail", str(exc)))
        return report
    except (UnboundParameter, ZeroDivision, TypeError) as exc:
        checks.insert(0, Check("invertibility", "fail", f"{type(exc).__name__}: {exc}"))
        return report
    checks.insert(0, Check("invertibility", "pass", "det P(s) is not identically zero"))

    # (c) limit
    try:
        lim = limit_tensor(tensor, n, s0, label=f"lim {w.label}")
    except PoleError as exc:
        checks.append(Check("limit", "fail", str(exc)))
        return report
    checks.append(Check("limit", "pass", f"finite at s0 = {s0}"))
    report.limit = lim

    # (d) exact equality with the printed target
    if lim != target:
        diff = _tensor_diff(lim, target)
        checks.append(Check("target-equality", "fail", diff))
        return report
    checks.append(Check("target-equality", "pass", "limit equals the target table"))

    # (e) invariants must not refute
    if battery:
        verdicts = []
        for p in _GENERIC_POINTS:
            if len(verdicts) == 3:
                break
            try:
                A_s = source.evaluate(p)
            except PoleError:
                continue
            verdicts.append(necessary_battery(A_s, target))
        bad = [v for v in verdicts if v.refuted]
        if not verdicts:
            checks.append(Check("necessary-battery", "fail", "no generic evaluation point"))
            return report
        if bad:
            checks.append(Check("necessary-battery", "fail", bad[0].summary()))
            return report
        checks.append(Check("necessary-battery", "pass", verdicts[0].summary()))
    report.status = "pass"
    return report


def _tensor_diff(A: Algebra, B: Algebra) -> str:
    diffs = []
    for i in range(A.dim):
        for j in range(A.dim):
            a, b = A.product(i, j), B.product(i, j)
            for k in range(A.dim):
                if a[k] != b[k]:
                    diffs.append(f"c({i + 1},{j + 1},{k + 1}): limit {a[k]} vs target {b[k]}")
    head = "; ".join(diffs[:4])
    return head + (f"; ... ({len(diffs)} differences)" if len(diffs) > 4 else "")


def scale_witness(name: str, n: int, params: tuple = ()) -> DegenerationWitness:
    """The witness E_i = t e_i to the zero algebra of the same dimension."""
    rows = tuple(
        tuple(Var("t") if i == j else Num(ZERO) for j in range(n)) for i in range(n)
    )
    return DegenerationWitness(
        f"{name}->zero{n}",
        name,
        f"zero{n}",
        ParametricBasis(rows),
        source_params=tuple((p, Var(p)) for p in params),
        params=params,
    )


# ---------------------------------------------------------------------------
# necessary conditions


@dataclass
class BatteryReport:
    verdicts: dict
    values: dict

    @property
    def refuted(self) -> bool:
        return any(v == "refuted" for v in self.verdicts.values())

    @property
    def verdict(self) -> str:
        return "refuted" if self.refuted else "consistent"

    def summary(self) -> str:
        v = self.values
        return (
            f"dim A^2 {v['square'][0]} vs {v['square'][1]}, "
            f"dim ann {v['annihilator'][0]} vs {v['annihilator'][1]}, "
            f"dim Der {v['der'][0]} vs {v['der'][1]}: {self.verdict}"
        )

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "checks": [
                {"name": name, "status": self.verdicts[name], "source": self.values[name][0], "target": self.values[name][1]}
                for name in ("square", "annihilator", "der")
            ],
        }


def necessary_battery(A: Algebra, B: Algebra) -> BatteryReport:
    """Invariant inequalities every degeneration A -> B must satisfy.

    dim A^2 >= dim B^2, dim ann A <= dim ann B, dim Der A <= dim Der B.
    The smaller algebra is padded with zero-multiplying directions.
    """
    n = max(A.dim, B.dim)
    A = A.pad_to(n) if A.dim < n else A
    B = B.pad_to(n) if B.dim < n else B
    sa, sb = square(A).dim, square(B).dim
    aa, ab = annihilator(A).dim, annihilator(B).dim
    da, db = derivation_dim(A), derivation_dim(B)
    verdicts = {
        "square": "consistent" if sa >= sb else "refuted",
        "annihilator": "consistent" if aa <= ab else "refuted",
        "der": "consistent" if da <= db else "refuted",
    }
    values = {"square": (sa, sb), "annihilator": (aa, ab), "der": (da, db)}
    return BatteryReport(verdicts, values)
