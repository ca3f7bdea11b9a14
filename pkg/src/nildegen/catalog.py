"""Built-in algebras, degeneration witnesses and condition sets.

Parameter names in the tables: ``a`` stands for alpha, ``l`` for lambda and
``m`` for mu.  Names follow the printed ones with ASCII spelling, e.g.
``mu1_4_5`` for the algebra with sub/superscripts 1,4 and 5, ``A4_06_1`` for
the 4-dimensional algebra A_06(1).  There is no ``mu16``: the printed list
jumps from mu15 to mu17.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

from .algebra import Algebra, zero_algebra
from .conditions import ConditionSet
from .degeneration import DegenerationWitness, scale_witness
from .dsl import AlgebraTemplate, ArityError, parse_algebra_template, parse_conditions, parse_witness
from .families import FAMILIES, ArityMismatch, named_family
from .scalars import as_gaussian

__all__ = [
    "UnknownName",
    "CatalogEntry",
    "ALGEBRA_SOURCES",
    "WITNESS_SOURCES",
    "CONDITION_SOURCES",
    "DER_READINGS",
    "catalog_get",
    "catalog_template",
    "catalog_entries",
    "catalog_names",
    "catalog_witnesses",
    "catalog_witness",
    "catalog_scale_witnesses",
    "catalog_condition_sets",
    "catalog_condition_set",
    "condition_variants",
    "concrete_algebra_names",
    "sample_params",
]


class UnknownName(KeyError):
    def __str__(self):
        return f"unknown catalog name {self.args[0]!r}"


# ---------------------------------------------------------------------------
# algebras

ALGEBRA_SOURCES = {
    "A4_05": """
algebra A4_05 dim 4
e1 e1 = e2
e1 e2 = e4
e1 e3 = e4
e2 e1 = e4
e3 e3 = e4
""",
    "A4_06_1": """
algebra A4_06_1 dim 4
e1 e1 = e2
e1 e2 = e4
e1 e3 = e4
e2 e1 = e4
""",
    "mu1_3_5": """
algebra mu1_3_5 dim 5
e1 e1 = e2
e1 e2 = e3
e1 e3 = e4
e1 e5 = e4
e2 e1 = e3
e2 e2 = e4
e3 e1 = e4
""",
    "mu1_4_5": """
algebra mu1_4_5 dim 5
e1 e1 = e2
e1 e2 = e3
e1 e3 = e4
e1 e5 = e4
e2 e1 = e3
e2 e2 = e4
e3 e1 = e4
e5 e5 = e4
""",
    "lambda2": """
algebra lambda2 dim 5
e1 e1 = e2
e1 e2 = e3
e1 e4 = e3
e2 e1 = e3
e4 e5 = e3
e5 e4 = e3
""",
    "lambda3": """
algebra lambda3 dim 5
e1 e1 = e2
e1 e2 = e3
e1 e4 = e3
e2 e1 = e3
e5 e5 = e3
""",
    "lambda4": """
algebra lambda4 dim 5
e1 e1 = e2
e1 e2 = e3
e1 e4 = e3
e2 e1 = e3
e4 e4 = e3
e5 e5 = e3
""",
    "lambda5": """
algebra lambda5 dim 5
e1 e1 = e2
e1 e2 = e3
e2 e1 = e3
e4 e5 = e3
e5 e4 = -e3
e5 e5 = e3
""",
    "lambda6": """
algebra lambda6 dim 5 params a
# printed with the constraint a != 1
e1 e1 = e2
e1 e2 = e3
e2 e1 = e3
e4 e5 = e3
e5 e4 = a*e3
""",
    "mu1": """
algebra mu1 dim 5
e1 e1 = e2
e1 e2 = e3
e2 e1 = e3
e4 e1 = e5
""",
    "mu2": """
algebra mu2 dim 5
e1 e1 = e2
e1 e2 = e3
e2 e1 = e3
e4 e1 = e5
e4 e4 = e3
""",
    "mu3": """
algebra mu3 dim 5
e1 e1 = e2
e1 e2 = e3
e2 e1 = e3
e4 e1 = e5
e4 e2 = e3
e5 e1 = e3
""",
    "mu4": """
algebra mu4 dim 5
e1 e1 = e2
e1 e2 = e3
e2 e1 = e3
e4 e1 = e5
e4 e2 = e3
e4 e4 = e3
e5 e1 = e3
""",
    "mu5": """
algebra mu5 dim 5
e1 e1 = e2
e1 e2 = e3
e1 e4 = e5
e2 e1 = e3
e4 e1 = e3 + e5
""",
    "mu6": """
algebra mu6 dim 5
e1 e1 = e2
e1 e2 = e3
e1 e4 = e5
e2 e1 = e3
e4 e1 = e3 + e5
e4 e4 = e3
""",
    "mu7": """
algebra mu7 dim 5 params a
# printed with the constraint a != 1
e1 e1 = e2
e1 e2 = e3
e1 e4 = e5
e2 e1 = e3
e4 e1 = a*e5
""",
    "mu8": """
algebra mu8 dim 5 params a
# printed with the constraint a != 1
e1 e1 = e2
e1 e2 = e3
e1 e4 = e5
e2 e1 = e3
e4 e1 = a*e5
e4 e4 = e3
""",
    "mu9": """
algebra mu9 dim 5
e1 e1 = e2
e1 e2 = e3
e2 e1 = e3
e4 e1 = e3
e4 e4 = e5
""",
    "mu10": """
algebra mu10 dim 5
e1 e1 = e2
e1 e2 = e3
e1 e4 = e5
e2 e1 = e3
e4 e4 = e5
""",
    "mu11": """
algebra mu11 dim 5
e1 e1 = e2
e1 e2 = e3
e1 e4 = e5
e2 e1 = e3
e4 e4 = e3 + e5
""",
    "mu12": """
algebra mu12 dim 5
e1 e1 = e2
e1 e2 = e3
e1 e4 = e5
e2 e1 = e3
e4 e1 = e2 - e5
e5 e1 = e3
""",
    "mu13": """
algebra mu13 dim 5
e1 e1 = e2
e1 e2 = e3
e1 e4 = e5
e2 e1 = e3
e4 e1 = e2 - e5
e4 e4 = e3
e5 e1 = e3
""",
    "mu14": """
algebra mu14 dim 5
e1 e1 = e2
e1 e2 = e3
e1 e4 = e5
e2 e1 = e3
e4 e1 = e2 + e5
e4 e2 = 2*e3
e4 e4 = 2*e5
e5 e1 = e3
""",
    "mu15": """
algebra mu15 dim 5
e1 e1 = e2
e1 e2 = e3
e1 e4 = e5
e2 e1 = e3
e4 e1 = e2 + e5
e4 e2 = 2*e3
e4 e4 = e3 + 2*e5
e5 e1 = e3
""",
    "mu17": """
algebra mu17 dim 5
e1 e1 = e2
e1 e2 = e3
e1 e4 = e5
e2 e1 = e3
e4 e1 = e3 + e5
e4 e4 = e2
e4 e5 = e3
e5 e4 = e3
""",
    "mu18": """
algebra mu18 dim 5
e1 e1 = e2
e1 e2 = e3
e1 e4 = e5
e2 e1 = e3
e4 e1 = -e5
e4 e4 = e2
e4 e5 = -e3
e5 e4 = e3
""",
    "mu19": """
algebra mu19 dim 5
e1 e1 = e2
e1 e2 = e3
e1 e4 = e5
e2 e1 = e3
e4 e1 = e2
e4 e2 = e3
e4 e4 = e3 + e5
e5 e1 = e3
""",
    "mu20": """
algebra mu20 dim 5
e1 e1 = e2
e1 e2 = e3
e1 e4 = e5
e2 e1 = e3
e4 e1 = e3 + e5
e4 e4 = -e2 + 2*e5
e4 e5 = e3
e5 e4 = -e3
""",
    "mu21_plus_i": """
algebra mu21_plus_i dim 5
e1 e1 = e2
e1 e2 = e3
e1 e4 = e5
e2 e1 = e3
e4 e1 = (1-i)*e2 + i*e5
e4 e2 = 2*e3
e4 e4 = -i*e2 + e3 + (1+i)*e5
e4 e5 = e3
e5 e1 = (1-i)*e3
e5 e4 = -i*e3
""",
    "mu21_minus_i": """
algebra mu21_minus_i dim 5
e1 e1 = e2
e1 e2 = e3
e1 e4 = e5
e2 e1 = e3
e4 e1 = (1+i)*e2 - i*e5
e4 e2 = 2*e3
e4 e4 = i*e2 + e3 + (1-i)*e5
e4 e5 = e3
e5 e1 = (1+i)*e3
e5 e4 = i*e3
""",
    "mu22": """
algebra mu22 dim 5 params a
# printed with the constraint a != 1
e1 e1 = e2
e1 e2 = e3
e1 e4 = e5
e2 e1 = e3
e4 e1 = (1 - a)*e2 + a*e5
e4 e2 = (1 - a^2)*e3
e4 e4 = -a*e2 + (1 + a)*e5
e4 e5 = -a^2*e3
e5 e1 = (1 - a)*e3
e5 e4 = -a*e3
""",
    "a133": """
algebra a133 dim 5 params l
e1 e1 = e3 + l*e5
e1 e2 = e3
e2 e1 = e4
e2 e2 = e5
""",
    "v41": """
algebra v41 dim 5 params l m
e1 e2 = e5
e2 e1 = l*e5
e3 e4 = e5
e4 e3 = m*e5
""",
}

ALIASES = {"v23": "a133", "lambda1_4_5": "mu1_4_5"}

# metadata: printed parameter constraints, not enforced on lookup
CONSTRAINTS = {"lambda6": "a != 1", "mu7": "a != 1", "mu8": "a != 1", "mu22": "a != 1"}

# dim Der under the two readings of "dim O = 20" for the one-parameter families
DER_READINGS = {
    "lambda6": {"orbit": 5, "orbit_plus_params": 6},
    "mu22": {"orbit": 5, "orbit_plus_params": 6},
}

_BRANCHES = {"+i": "mu21_plus_i", "i": "mu21_plus_i", "-i": "mu21_minus_i"}


@lru_cache(maxsize=None)
def catalog_template(name: str) -> AlgebraTemplate:
    name = ALIASES.get(name, name)
    try:
        text = ALGEBRA_SOURCES[name]
    except KeyError:
        raise UnknownName(name) from None
    return parse_algebra_template(text, file=f"catalog:{name}")


def _zero_dim(name: str) -> int | None:
    if name.startswith("zero") and name[4:].isdigit():
        return int(name[4:])
    return None


def catalog_get(name: str, params: Mapping | None = None, **kw) -> Algebra:
    """The printed table for ``name`` with ``params`` bound."""
    params = dict(params or {}, **kw)
    name = ALIASES.get(name, name)
    n = _zero_dim(name)
    if n is not None:
        if params:
            raise ArityMismatch(f"{name} takes no parameters")
        return zero_algebra(n)
    if name.startswith("mu0_") and name[4:].isdigit():
        if params:
            raise ArityMismatch(f"{name} takes no parameters")
        return named_family("mu0", {"n": int(name[4:])})
    if name == "mu21":
        if set(params) != {"branch"}:
            raise ArityMismatch("mu21 expects exactly one parameter: branch=+i or branch=-i")
        b = str(params["branch"]).replace(" ", "")
        if b not in _BRANCHES:
            raise ArityMismatch(f"mu21 branch must be +i or -i, got {b!r}")
        return catalog_get(_BRANCHES[b])
    if name in ALGEBRA_SOURCES:
        try:
            return catalog_template(name).bind(params)
        except ArityError as exc:
            raise ArityMismatch(str(exc)) from None
    if name in FAMILIES or name == "snk":
        return named_family(name, params)
    raise UnknownName(name)


def concrete_algebra_names() -> list:
    return [k for k in ALGEBRA_SOURCES if not catalog_template(k).params] + ["mu0_5"]


def sample_params(name: str, rng) -> dict:
    """Random admissible small-integer parameters for a family name."""
    tpl_params: tuple
    if name in ALGEBRA_SOURCES:
        tpl_params = catalog_template(name).params
    elif name in ("n2", "n3"):
        tpl_params = ("a",)
    else:
        raise UnknownName(name)
    out = {}
    for p in tpl_params:
        v = 1
        while v in (0, 1, -1):
            v = int(rng.integers(-9, 10))
        out[p] = v
    return out


# ---------------------------------------------------------------------------
# witnesses

_INV = """basis:
E1 = t^(-1) e1
E2 = t^(-2) e2
E3 = t^(-3) e3
E4 = t^(-1) e4
E5 = t^(-2) e5
"""

WITNESS_SOURCES = {
    "A4_05->A4_06_1": """
degeneration A4_05_to_A4_06_1
source = A4_05
target = A4_06_1
basis:
E1 = t e1
E2 = t^2 e2
E3 = t^2 e3
E4 = t^3 e4
E5 = e5
""",
    "lambda6(0)->A4_05": """
degeneration lambda6_0_to_A4_05
source = lambda6 with a = 0
target = A4_05
basis:
E1 = e1 - e5
E2 = e2
E3 = e2 + e4 + e5
E4 = e3
E5 = t e5
""",
    "mu1_4_5->mu1_3_5": """
degeneration mu1_4_5_to_mu1_3_5
source = mu1_4_5
target = mu1_3_5
basis:
E1 = t e1
E2 = t^2 e2
E3 = t^3 e3
E4 = t^4 e4
E5 = t^3 e5
""",
    "mu4->mu3": "degeneration mu4_to_mu3\nsource = mu4\ntarget = mu3\n" + _INV,
    "mu11->mu10": "degeneration mu11_to_mu10\nsource = mu11\ntarget = mu10\n" + _INV,
    "lambda6(1+t)->lambda2": """
degeneration lambda6_to_lambda2
source = lambda6 with a = 1 + t
target = lambda2
basis:
E1 = t e1 + e5
E2 = t^2 e2
E3 = t^3 e3
E4 = -t e2 + t^2 e4 + t^2/(2 + t) e5
E5 = t e5
""",
    "lambda4->lambda3": """
degeneration lambda4_to_lambda3
source = lambda4
target = lambda3
# t^(3/2) is written as s^3 with t = s^2
subst t = s^2
basis:
E1 = t e1
E2 = t^2 e2
E3 = t^3 e3
E4 = t^2 e4
E5 = s^3 e5
""",
    "mu1_4_5->lambda4": """
degeneration mu1_4_5_to_lambda4
# the printed source name is lambda_{1,4}^5; read here as mu_{1,4}^5
source = mu1_4_5
target = lambda4
basis:
E1 = t e1 + e2 + 1/(2 t) e3
E2 = -t^2 e2 + 2 e4
E3 = t^2 e4
E4 = t e5
E5 = -t e2 - e3
""",
    "lambda6(-1/(1+t))->lambda5": """
degeneration lambda6_to_lambda5
source = lambda6 with a = -1/(1 + t)
target = lambda5
basis:
E1 = t e1
E2 = t^2 e2
E3 = t^3 e3
E4 = t e5
E5 = -t^2 (t + 1) e4 - e5
""",
    "mu6->mu5": """
degeneration mu6_to_mu5
source = mu6
target = mu5
basis:
E1 = t e1
E2 = t^2 e2
E3 = t^3 e3
E4 = t^2 e4
E5 = t^3 e5
""",
    "mu13->mu12": "degeneration mu13_to_mu12\nsource = mu13\ntarget = mu12\n" + _INV,
    "mu2->mu1": """
degeneration mu2_to_mu1
source = mu2
target = mu1
basis:
E1 = e1
E2 = e2
E3 = e3
E4 = t e4
E5 = t e5
""",
    "mu11->mu2": """
degeneration mu11_to_mu2
source = mu11
target = mu2
basis:
E1 = t^2 e1 - t^2 e4
E2 = t^4 e2 + t^4 e3
E3 = t^6 e3
E4 = -t^3 e2 - t^3 e4
E5 = t^5 e5
""",
    "mu8(a)->mu7(a)": """
degeneration mu8_to_mu7 params a
source = mu8 with a = a
target = mu7 with a = a
exclude a - 1
basis:
E1 = e1
E2 = e2
E3 = e3
E4 = t e4
E5 = t e5
""",
    "mu15->mu14": "degeneration mu15_to_mu14\nsource = mu15\ntarget = mu14\n" + _INV,
    "mu22(1/t)->mu4": """
degeneration mu22_to_mu4
source = mu22 with a = 1/t
target = mu4
basis:
E1 = t^2 (t^4 - 1) e1 + t^3 (t^2 - 1)^4 (t^2 + 1) e5
E2 = t^4 (t^4 - 1)^2 e2 + t^4 (t - 1)^6 (t + 1)^5 (t^2 + 1)^2 e3
E3 = t^6 (t^4 - 1)^3 e3
E4 = t^4 (t - 1)^4 (t + 1)^3 (t^2 + 1) e2 + (t^4 + t^6) e4
E5 = t^5 (t - 1)^2 (t + 1) (t^2 + 1)^2 e2 + t^5 (t^2 - 1)^4 (t^2 + 1)^2 (t^2 - t - 1) e3 + t^5 (t^2 - 1) (t^2 + 1)^2 e5
""",
    "mu15->mu6": """
degeneration mu15_to_mu6
source = mu15
target = mu6
basis:
E1 = t^2/(t + 1) e1
E2 = t^4/(t + 1)^2 e2
E3 = t^6/(t + 1)^3 e3
E4 = t^3/(t + 1) e4 + t^4/(t + 1)^2 e5
E5 = t^5/(t + 1)^2 e5
""",
    "mu22(a)->mu8(a)": """
degeneration mu22_to_mu8 params a
source = mu22 with a = a
target = mu8 with a = a
exclude a + a^3
exclude a - 1
basis:
E1 = t (a + a^3) e1 + (a + a^3) e5
E2 = t^2 (a + a^3)^2 e2 + t (1 - a) (a + a^3)^2 e3
E3 = t^3 (a + a^3)^3 e3
E4 = t (1 - a) (a + a^3) e2 + t^2 (a + a^3) e4
E5 = t^2 (1 - 2 a) (a + a^3)^2 e3 + t^3 (a + a^3)^2 e5
""",
    "mu11->mu9": """
degeneration mu11_to_mu9
source = mu11
target = mu9
basis:
E1 = (t^4 + 1)/(t - t^2) e1 - (t^4 + 1) (1 + t^5)/(2 (1 - t)^3 t^4) e2 + (t^4 + 1)/(1 - t)^2 e4
E2 = (t^4 + 1)/((1 - t)^2 t^2) e2 - (t^4 + 1)^2/((1 - t)^4 t^5) e3
E3 = (t^4 + 1)^2/((1 - t)^3 t^3) e3
E4 = (t^4 + 1)/((1 - t)^2 t^2) e2 + (t^4 + 1)/((t - 1)^2 t^2) e4
E5 = (t^4 + 1)/((1 - t)^2 t) e2 + (t^4 + 1)^2/((t - 1)^4 t^4) e5
""",
    "mu18->mu13": """
degeneration mu18_to_mu13
source = mu18
target = mu13
# s plays the role of sqrt(4t - 1); s0 = i picks the branch
subst t = (s^2 + 1)/4
point s0 = i
basis:
E1 = s e1 - 2 e2 + e4
E2 = 4 t e2 - 4 s e3
E3 = 4 t s e3
E4 = -2 e2 + 2 t e4
E5 = 2 t e2 - 2 s e3 + 2 t s e5
""",
    "mu22(t)->mu19": """
degeneration mu22_to_mu19
source = mu22 with a = t
target = mu19
basis:
E1 = (t - 1) (t + t^3) e1 + (t - 1)^4 t (1 + t^2) e5
E2 = (t - 1)^2 (t + t^3)^2 e2 - (t - 1)^6 (t + t^3)^2 e3
E3 = (t - 1)^3 (t + t^3)^3 e3
E4 = (t - 1)^4 (t + t^3) e2 - t (1 + t^2) e4
E5 = (t - 1)^4 (-1 + 2 t) (t + t^3)^2 e3 - (t - 1) (t + t^3)^2 e5
""",
}


@lru_cache(maxsize=None)
def catalog_witness(key: str) -> DegenerationWitness:
    try:
        text = WITNESS_SOURCES[key]
    except KeyError:
        raise UnknownName(key) from None
    return parse_witness(text, file=f"catalog:{key}")


def catalog_witnesses() -> list:
    """The 21 printed degenerations, in table order."""
    return [catalog_witness(k) for k in WITNESS_SOURCES]


def catalog_scale_witnesses() -> list:
    out = []
    for name in concrete_algebra_names():
        n = catalog_get(name).dim
        out.append(scale_witness(name, n))
    return out


# ---------------------------------------------------------------------------
# condition sets
#
# Sets whose printed exponents look like typos (A1^3, A2^4) are stored
# literally; condition_variants() also yields the squared reading.

_R2 = "rebase e1 e4 e5 e2 e3"

CONDITION_SOURCES = {
    "R_A4_05": """
conditions R_A4_05 dim 4 mode symmetric
A1 A2 sub A4
c(2,2,4) c(3,3,4) = c(3,2,4) c(2,3,4)
c(2,3,4) = c(3,2,4)
""",
    "R_mu1_4_5": """
conditions R_mu1_4_5 mode symmetric rebase e1 e5 e2 e3 e4
A1^2 sub A3
A1 A2 sub A4
A2^2 + A4 A1 + A1 A4 sub A5
""",
    "R_lambda6": f"""
conditions R_lambda6 mode one_sided {_R2}
A1^2 sub A4
""",
    "R_mu11": f"""
conditions R_mu11 mode one_sided {_R2}
A1^2 sub A3
A1 A3 + A3 A1 sub A5
A2 A3 = 0
c(1,4,5) = c(4,1,5)
c(1,1,3) c(2,2,4) = c(1,2,3) c(2,1,4) = c(2,1,3) c(1,2,4)
c(2,2,3) c(1,2,4) = c(2,2,4) c(1,2,3)
c(1,2,3) c(2,1,3) = c(1,1,3) c(2,2,3)
""",
    "R_mu15": f"""
conditions R_mu15 mode one_sided {_R2}
A1^2 sub A3
A1 A3 sub A5
A3^2 + A2 A4 + A4 A2 = 0
c(1,2,3) = c(2,1,3)
c(1,2,4) c(2,2,3) = c(1,2,3) c(2,2,4)
""",
    "R_mu17": f"""
conditions R_mu17 mode one_sided {_R2}
A1^2 sub A3
A2^2 sub A4
A1 A3 + A3 A1 sub A5
c(1,2,3) = c(2,1,3)
c(1,2,4) = c(2,1,4)
c(2,3,5) = c(3,2,5)
c(1,4,5) = c(4,1,5)
c(1,3,5) = c(3,1,5)
""",
    "R_mu18": """
conditions R_mu18 mode one_sided rebase e4 e1 e5 e2 e3
# the printed rebase e1 e4 e5 e2 e3 violates c(2,3,5) = c(3,2,5)
A1^3 sub A3
A2^4 sub A4
A1 A3 + A3 A1 sub A5
c(2,1,3) = -c(1,2,3)
c(1,1,3) = 0
c(2,3,5) = c(3,2,5)
""",
    "R_mu20": """
conditions R_mu20 mode one_sided
# the printed rebase e1 e4 e5 e2 e3 violates c(2,3,5) = c(3,2,5)
E1 = e1
E2 = e1 + e4
E3 = e2
E4 = -e2 + e5
E5 = e3
A1^3 sub A3
A1 A3 + A3 A1 sub A5
A2 A4 = 0
c(2,1,3) = c(1,2,3)
c(2,1,4) = c(1,2,4)
c(1,4,5) = c(4,1,5)
c(2,3,5) = c(3,2,5)
""",
    "R_mu22": f"""
conditions R_mu22 mode one_sided {_R2}
A1^3 sub A3
A1 A3 + A3 A1 sub A5
(c(1,2,3) c(2,1,4) - c(1,2,4) c(2,1,3)) (c(1,1,4) c(1,2,3)^2 - c(1,1,3) c(1,2,3) c(1,2,4) - c(1,1,4) c(2,1,3)^2 + c(1,1,3) c(2,1,3) c(2,1,4)) = c(2,2,3) (c(1,1,4) c(1,2,3) - c(1,1,3) c(1,2,4) - c(1,1,4) c(2,1,3) + c(1,1,3) c(2,1,4))^2
(c(1,2,3) c(2,1,4) - c(1,2,4) c(2,1,3)) (c(1,1,4) c(1,2,3) c(1,2,4) - c(1,1,3) c(1,2,4)^2 - c(1,1,4) c(2,1,3) c(2,1,4) + c(1,1,3) c(2,1,4)^2) = c(2,2,4) (c(1,1,4) c(1,2,3) - c(1,1,3) c(1,2,4) - c(1,1,4) c(2,1,3) + c(1,1,3) c(2,1,4))^2
""",
    "R_mu21_minus_i": """
conditions R_mu21_minus_i mode one_sided
# no basis is printed for this set; the namesake satisfies it in this one
E1 = e1 - e4
E2 = e4
E3 = e5
E4 = e2
E5 = e3
A1^3 sub A3
A1 A3 + A3 A1 sub A5
2 c(2,2,3) c(1,1,3) = c(1,2,3)^2 + c(2,1,3)^2
2 c(1,1,4) c(2,2,3)^2 = (c(1,2,3) + i c(2,1,3)) (2 c(2,2,3) c(1,2,4) - c(2,2,4) c(1,2,3) - i c(2,2,4) c(2,1,3))
2 c(2,2,4) c(1,1,3)^2 = (c(1,2,3) - i c(2,1,3)) (2 c(1,1,3) c(1,2,4) - c(1,1,4) c(1,2,3) + i c(1,1,4) c(2,1,3))
c(2,2,3) (c(2,1,4) - i c(1,2,4)) = c(2,2,4) (c(2,1,3) - i c(1,2,3))
c(1,1,3) (c(2,1,4) - i c(1,2,4)) = c(1,1,4) (c(2,1,3) - i c(1,2,3))
""",
    "R_mu21_plus_i": """
conditions R_mu21_plus_i mode one_sided
# no basis is printed for this set; the namesake satisfies it in this one
E1 = e1 - e4
E2 = e4
E3 = e5
E4 = e2
E5 = e3
A1^3 sub A3
A1 A3 + A3 A1 sub A5
2 c(2,2,3) c(1,1,3) = c(1,2,3)^2 + c(2,1,3)^2
2 c(1,1,4) c(2,2,3)^2 = (c(1,2,3) - i c(2,1,3)) (2 c(2,2,3) c(1,2,4) - c(2,2,4) c(1,2,3) + i c(2,1,3) c(2,2,4))
2 c(2,2,4) c(1,1,3)^2 = (c(1,2,3) + i c(2,1,3)) (2 c(1,1,3) c(1,2,4) - c(1,1,4) c(1,2,3) - i c(2,1,3) c(1,1,4))
c(2,2,3) (c(2,1,4) + i c(1,2,4)) = c(2,2,4) (c(2,1,3) + i c(1,2,3))
c(1,1,3) (c(2,1,4) + i c(1,2,4)) = c(1,1,4) (c(2,1,3) + i c(1,2,3))
""",
}

# the rebasings as printed, where they differ from the recorded ones
PRINTED_REBASE = {
    "R_mu18": (1, 4, 5, 2, 3),
    "R_mu20": (1, 4, 5, 2, 3),
    "R_mu21_minus_i": None,
    "R_mu21_plus_i": None,
}

# namesake algebra of each set; parameterized ones are checked at sampled values
NAMESAKES = {
    "R_A4_05": "A4_05",
    "R_mu1_4_5": "mu1_4_5",
    "R_lambda6": "lambda6",
    "R_mu11": "mu11",
    "R_mu15": "mu15",
    "R_mu17": "mu17",
    "R_mu18": "mu18",
    "R_mu20": "mu20",
    "R_mu22": "mu22",
    "R_mu21_minus_i": "mu21_minus_i",
    "R_mu21_plus_i": "mu21_plus_i",
}

# sets printed with exponents that read like typos for squares
TYPO_EXPONENTS = ("R_mu18", "R_mu20", "R_mu22", "R_mu21_minus_i", "R_mu21_plus_i")

# per-set choices that reproduce the printed claims (see tests/test_acceptance.py)
_OVERRIDES: dict = {"R_mu18": "corrected"}


@lru_cache(maxsize=None)
def _parsed_condition_set(key: str) -> ConditionSet:
    try:
        text = CONDITION_SOURCES[key]
    except KeyError:
        raise UnknownName(key) from None
    return parse_conditions(text, file=f"catalog:{key}")


def _squared(cs: ConditionSet) -> ConditionSet:
    from .conditions import Containment, Power

    out = []
    for c in cs.containments:
        e = c.expr
        if isinstance(e, Power) and e.exp > 2:
            e = Power(e.base, 2)
        out.append(Containment(e, c.bound, c.zero))
    return ConditionSet(cs.label + "_corrected", tuple(out), cs.polys, cs.mode, cs.rebase, cs.dim, "exponents read as squares")


def condition_variants(key: str) -> dict:
    """{"literal": cs, "corrected": cs'}; both equal when nothing was corrected."""
    cs = _parsed_condition_set(key)
    return {"literal": cs, "corrected": _squared(cs) if key in TYPO_EXPONENTS else cs}


def catalog_condition_set(key: str, variant: str | None = None) -> ConditionSet:
    variants = condition_variants(key)
    choice = variant or _OVERRIDES.get(key, "literal")
    try:
        return variants[choice]
    except KeyError:
        raise UnknownName(f"{key} ({choice})") from None


def catalog_condition_sets() -> list:
    """The eleven printed sets, each in its recorded variant."""
    return [catalog_condition_set(k) for k in CONDITION_SOURCES]


# ---------------------------------------------------------------------------
# directory


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    kind: str  # algebra, family, witness, condition_set
    params: tuple = ()
    note: str = ""
    payload: object = field(default=None, compare=False, repr=False)


def catalog_entries() -> list:
    out = []
    for name in ALGEBRA_SOURCES:
        tpl = catalog_template(name)
        kind = "family" if tpl.params else "algebra"
        note = CONSTRAINTS.get(name, "")
        out.append(CatalogEntry(name, kind, tpl.params, note, tpl))
    out.append(CatalogEntry("mu21", "family", ("branch",), "branch = +i or -i"))
    for name, spec in FAMILIES.items():
        if name not in ALGEBRA_SOURCES:
            out.append(CatalogEntry(name, "family", spec.params, spec.doc))
    for alias, target in ALIASES.items():
        out.append(CatalogEntry(alias, "alias", (), f"same as {target}"))
    for key in WITNESS_SOURCES:
        w = catalog_witness(key)
        out.append(CatalogEntry(key, "witness", w.params, f"{w.source} -> {w.target}", w))
    for key in CONDITION_SOURCES:
        cs = catalog_condition_set(key)
        out.append(CatalogEntry(key, "condition_set", (), f"namesake {NAMESAKES[key]}", cs))
    return out


def catalog_names() -> list:
    return [e.name for e in catalog_entries()]


def parse_param_value(v):
    """Scalar literal from a query string such as ``a=-1/2`` or ``branch=+i``."""
    if isinstance(v, str):
        from .dsl import parse_scalar

        return parse_scalar(v)
    return as_gaussian(v)
