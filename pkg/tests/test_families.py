import random

import pytest

from nildegen.algebra import annihilator, classify, derivation_dim, fingerprint, in_Unk, make_algebra, zero_algebra
from nildegen.families import (
    ArityMismatch,
    Flavor,
    UnknownFamily,
    a133,
    algebra_from_matrices,
    component_dim,
    component_range,
    components,
    frak_A,
    gamma,
    h_family,
    jordan,
    n2alpha,
    n3alpha,
    named_family,
    null_filiform,
    sample_random,
    skew_sum,
    snk,
    v32,
)
from nildegen.scalars import ONE, ZERO, GaussianRational

G = GaussianRational


def ints(M):
    return [[int(x.real) for x in row] for row in M]


def test_snk_matches_h_family():
    lam, mu = G(3), G(-2)
    coeffs = [[[x] for x in row] for row in frak_A([lam, mu], 4)]
    assert snk(5, 1, coeffs) == h_family(4, [lam, mu])


@pytest.mark.parametrize("flavor", list(Flavor))
def test_snk_flavors(flavor):
    for seed in range(5):
        A = sample_random(6, 2, flavor, seed)
        f = classify(A)
        assert f.two_step_nilpotent
        if flavor is Flavor.COMMUTATIVE:
            assert f.commutative
        if flavor is Flavor.ANTICOMMUTATIVE:
            assert f.anticommutative


def test_matrix_builders():
    assert ints(skew_sum(jordan(1, 7), [[1]])) == [[0, 1], [7, 0]]
    assert ints(jordan(1, 0)) == [[0]]
    assert ints(jordan(3, 2)) == [[2, 1, 0], [0, 2, 1], [0, 0, 2]]
    assert ints(frak_A([G(2), G(5)], 4)) == [[0, 1, 0, 0], [2, 0, 0, 0], [0, 0, 0, 1], [0, 0, 5, 0]]
    assert ints(frak_A([], 1)) == [[1]]
    assert ints(frak_A([G(0)], 2)) == [[0, 1], [0, 0]]


def test_gamma_band():
    assert ints(gamma(1)) == [[1]]
    assert ints(gamma(2)) == [[0, -1], [1, 1]]
    g6 = ints(gamma(6))
    assert g6[5][:2] == [1, 1]
    assert g6[4][1:3] == [-1, -1]
    assert g6[3][2:4] == [1, 1]
    assert g6[1][4:] == [1, 1]
    # smaller sizes truncate the same band
    for k in range(1, 6):
        assert ints(gamma(k)) == [row[:k] for row in ints(gamma(k + 1))[1:]]


def test_algebra_from_matrices():
    lam, mu = G(4), G(9)
    assert algebra_from_matrices([frak_A([lam, mu], 4)]) == h_family(4, [lam, mu])
    assert algebra_from_matrices([[[ZERO] * 3 for _ in range(3)]]) == zero_algebra(4)
    V = v32(*(G(v) for v in (2, 1, 2, 3, 4, 5, 6, 7)))
    assert V.c(1, 1, 4) == ONE and V.c(3, 2, 4) == G(2) and V.c(3, 3, 5) == ONE and V.c(1, 2, 5) == ONE


def test_named_family_tables():
    assert a133(0) == make_algebra(5, [(1, 1, 3, 1), (1, 2, 3, 1), (2, 1, 4, 1), (2, 2, 5, 1)])
    assert null_filiform(4) == named_family("mu0", {"n": 4})
    assert n3alpha(1) == make_algebra(4, [(1, 1, 4, 1), (1, 2, 4, 1), (2, 1, 4, -1), (2, 2, 4, 1), (3, 3, 4, 1)])
    with pytest.raises(UnknownFamily):
        named_family("nope", {})
    with pytest.raises(ArityMismatch):
        named_family("a133", {})
    with pytest.raises(ArityMismatch):
        frak_A([ONE], 4)


def test_n2_n3_two_step():
    r = random.Random(3)
    for _ in range(20):
        a = G(r.randint(-50, 50), r.randint(-5, 5), r.randint(1, 9))
        assert classify(n2alpha(a)).two_step_nilpotent
        assert classify(n3alpha(a)).two_step_nilpotent


def test_component_ranges():
    assert list(component_range(5, "all")) == [1, 2, 3]
    assert list(component_range(4, "all")) == [1, 2]
    assert list(component_range(5, "anticommutative")) == [1, 2]
    assert component_dim(5, 1) == 20
    assert component_dim(5, 2) == 24
    assert component_dim(5, 3) == 18
    for f in Flavor:
        assert component_dim(6, 6, f) == 0


@pytest.mark.parametrize("flavor", list(Flavor))
def test_range_cross_check(flavor):
    for n in range(1, 13):
        r = component_range(n, flavor)
        if r.inconsistent:
            # only the tiny anticommutative cases disagree
            assert flavor is Flavor.ANTICOMMUTATIVE and n <= 4
            continue
        assert list(r.ks) == list(r.reconciled)


def test_components_report():
    rep = components(5, "all")
    assert [(c.k, c.dim) for c in rep.components] == [(1, 20), (2, 24), (3, 18)]
    assert rep.variety_dim == 24


def test_sample_random():
    for seed in range(5):
        assert in_Unk(sample_random(5, 1, "all", seed), 1)
        assert not in_Unk(sample_random(4, 1, "anticommutative", seed), 1)
        assert annihilator(sample_random(4, 1, "anticommutative", seed)).dim >= 2
    assert sample_random(5, 2, "all", 11) == sample_random(5, 2, "all", 11)


@pytest.mark.parametrize("n", range(2, 8))
def test_h_family_generic_derivations(n):
    r = random.Random(n)
    lams = [G(v) for v in r.sample(range(2, 60), n // 2)]
    d = derivation_dim(h_family(n, lams))
    assert d == 3 * n // 2 + 1
    assert (n + 1) ** 2 - d + n // 2 == n * (n + 1)


def test_v32_component_dimension():
    r = random.Random(5)
    params = [G(r.randint(2, 40)) for _ in range(8)]
    fp = fingerprint(v32(*params))
    assert fp.dim_square == 2 and fp.dim_annihilator == 2
    # 8 printed parameters, 6 of them independent
    assert 25 - fp.dim_der + 6 == 24
