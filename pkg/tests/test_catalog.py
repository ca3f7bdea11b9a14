import numpy as np
import pytest

from nildegen.algebra import classify, derivation_dim, fingerprint, nil_index
from nildegen.catalog import (
    ALGEBRA_SOURCES,
    ALIASES,
    CONDITION_SOURCES,
    CONSTRAINTS,
    DER_READINGS,
    NAMESAKES,
    PRINTED_REBASE,
    TYPO_EXPONENTS,
    UnknownName,
    catalog_condition_set,
    catalog_condition_sets,
    catalog_entries,
    catalog_get,
    catalog_names,
    catalog_witness,
    catalog_witnesses,
    concrete_algebra_names,
    condition_variants,
    sample_params,
)
from nildegen.conditions import eval_conditions
from nildegen.families import ArityMismatch, n2alpha, n3alpha, null_filiform
from nildegen.scalars import GaussianRational, I

G = GaussianRational

# the printed mu20 table fails associativity; see the ledger
NON_ASSOCIATIVE_AS_PRINTED = {"mu20"}
# no basis makes mu15 satisfy its printed set; see the ledger
UNSATISFIED_BY_NAMESAKE = {"R_mu15"}


def test_catalog_get_examples():
    assert catalog_get("mu0", {"n": 5}) == null_filiform(5)
    A = catalog_get("lambda6", {"a": 0})
    assert sorted(A.table) == [(0, 0), (0, 1), (1, 0), (3, 4)]
    assert A.c(1, 1, 2) == 1 and A.c(1, 2, 3) == 1 and A.c(2, 1, 3) == 1 and A.c(4, 5, 3) == 1
    M = catalog_get("mu21", {"branch": "+i"})
    assert M.c(4, 1, 2) == G(1, -1) and M.c(4, 1, 5) == I


def test_catalog_errors():
    with pytest.raises(UnknownName):
        catalog_get("nope")
    with pytest.raises(ArityMismatch):
        catalog_get("mu22")
    with pytest.raises(ArityMismatch):
        catalog_get("mu21", {"branch": "2i"})
    with pytest.raises(ArityMismatch):
        catalog_get("mu11", {"a": 1})


def test_aliases_resolve():
    for alias, target in ALIASES.items():
        params = {"l": 3} if target == "a133" else {}
        assert catalog_get(alias, params) == catalog_get(target, params)


def test_catalog_health():
    for name in concrete_algebra_names():
        A = catalog_get(name)
        assert nil_index(A) != float("inf"), name
        if name in NON_ASSOCIATIVE_AS_PRINTED:
            assert not classify(A).associative
        else:
            assert classify(A).associative, name
    rng = np.random.default_rng(0)
    for name in ALGEBRA_SOURCES:
        if name in ("mu7", "mu8", "lambda6", "mu22", "a133", "v41"):
            A = catalog_get(name, sample_params(name, rng))
            assert classify(A).associative and nil_index(A) != float("inf"), name
    for name in ("a133", "v41"):
        assert classify(catalog_get(name, sample_params(name, rng))).two_step_nilpotent
    for _ in range(20):
        a = G(int(rng.integers(-99, 100)), int(rng.integers(-9, 10)), int(rng.integers(1, 20)))
        assert classify(n2alpha(a)).two_step_nilpotent and classify(n3alpha(a)).two_step_nilpotent


def test_mu20_associativity_defect_is_localized():
    A = catalog_get("mu20")
    # associativity forces e4 e5 = e5 e4 = -e3, the printed table has e4 e5 = e3
    assert A.c(5, 4, 3) == -1 and A.c(4, 5, 3) == 1


def test_witness_ledger_metadata():
    ws = catalog_witnesses()
    assert len(ws) == 21
    w = catalog_witness("mu22(a)->mu8(a)")
    assert {str(e) for e in w.exclusions} == {"a + a^3", "a - 1"}
    assert catalog_witness("mu1_4_5->lambda4").source == "mu1_4_5"
    assert str(catalog_witness("mu18->mu13").basis.point) == "i"


def test_condition_sets_and_namesakes():
    sets = catalog_condition_sets()
    assert len(sets) == 11 == len(CONDITION_SOURCES) == len(NAMESAKES)
    rng = np.random.default_rng(1)
    for key in CONDITION_SOURCES:
        cs = catalog_condition_set(key)
        name = NAMESAKES[key]
        for _ in range(3 if name in ("lambda6", "mu22") else 1):
            A = catalog_get(name, sample_params(name, rng))
            ok, _ = eval_conditions(A, cs)
            assert ok == (key not in UNSATISFIED_BY_NAMESAKE), key


def test_r_mu15_shape():
    cs = catalog_condition_set("R_mu15")
    assert len([c for c in cs.containments if not c.zero]) == 2
    assert len([c for c in cs.containments if c.zero]) == 1
    assert len(cs.polys) == 2


def test_condition_variants():
    for key in CONDITION_SOURCES:
        v = condition_variants(key)
        if key in TYPO_EXPONENTS:
            assert v["literal"] != v["corrected"]
            assert all(getattr(c.expr, "exp", 2) <= 2 for c in v["corrected"].containments)
        else:
            assert v["literal"] == v["corrected"]
    assert catalog_condition_set("R_mu18").label.endswith("_corrected")
    assert set(PRINTED_REBASE) <= set(CONDITION_SOURCES)


def test_der_readings_recorded():
    rng = np.random.default_rng(2)
    for name, readings in DER_READINGS.items():
        d = derivation_dim(catalog_get(name, sample_params(name, rng)))
        assert d in readings.values()
        assert readings["orbit_plus_params"] - readings["orbit"] == 1
    assert CONSTRAINTS["mu22"] == "a != 1"


def test_directory():
    names = catalog_names()
    assert len(names) == len(set(names))
    kinds = {e.kind for e in catalog_entries()}
    assert kinds == {"algebra", "family", "alias", "witness", "condition_set"}
    for e in catalog_entries():
        if e.kind == "algebra":
            assert fingerprint(catalog_get(e.name)).dim in (4, 5)
