import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nildegen.algebra import zero_algebra
from nildegen.catalog import ALGEBRA_SOURCES, CONDITION_SOURCES, WITNESS_SOURCES, catalog_condition_set, catalog_get, catalog_template, catalog_witness
from nildegen.conditions import NonHomogeneousClause
from nildegen.degeneration import verify_witness
from nildegen.dsl import (
    AlgebraTemplate,
    ArityError,
    SubstitutionInvalid,
    parse_algebra,
    parse_algebra_template,
    parse_conditions,
    parse_ratfunc,
    parse_scalar,
    parse_witness,
    serialize_algebra,
    serialize_conditions,
    serialize_witness,
)
from nildegen.families import a133
from nildegen.scalars import GaussianRational, RatFunc
from nildegen.syntax import ParseError, SourceSpan

A133 = """algebra a133 dim 5 params l
e1 e1 = e3 + l*e5
e1 e2 = e3
e2 e1 = e4
e2 e2 = e5
"""

W1445 = """degeneration w
source = mu1_4_5
target = mu1_3_5
basis:
E1 = t e1
E2 = t^2 e2
E3 = t^3 e3
E4 = t^4 e4
E5 = t^3 e5
"""


def test_parse_algebra_examples():
    tpl = parse_algebra(A133)
    assert isinstance(tpl, AlgebraTemplate) and tpl.params == ("l",)
    assert tpl.bind({"l": 0}) == a133(0)
    assert parse_algebra("algebra z dim 3") == zero_algebra(3)
    with pytest.raises(ParseError) as exc:
        parse_algebra("algebra x dim 5\ne1 e1 = e9\n", file="x.alg")
    span = exc.value.span
    assert isinstance(span, SourceSpan) and (span.file, span.line) == ("x.alg", 2)
    assert span.col == 9 and span.end_col > span.col


def test_duplicate_product_line():
    with pytest.raises(ParseError) as exc:
        parse_algebra("algebra x dim 3\ne1 e1 = e2\n# again\ne1 e1 = e3\n")
    assert exc.value.span.line == 4


def test_arity():
    tpl = parse_algebra_template(A133)
    with pytest.raises(ArityError):
        tpl.bind({})
    with pytest.raises(ArityError):
        tpl.bind({"l": 1, "m": 2})


def test_comments_and_blank_lines():
    A = parse_algebra("# header\n\nalgebra x dim 2   # trailing\ne1 e1 = 2*e2\n")
    assert A.c(1, 1, 2) == 2


def test_witness_examples():
    w = parse_witness(W1445)
    assert verify_witness(w).passed
    assert parse_witness(serialize_witness(w)) == w
    w = parse_witness(W1445.replace("basis:", "subst t = (s^2+1)/4\npoint s0 = i\nbasis:"))
    assert str(w.basis.point) == "i"
    with pytest.raises(SubstitutionInvalid):
        parse_witness(W1445.replace("basis:", "point s0 = 1\nbasis:"))


def test_witness_missing_rows():
    with pytest.raises(ParseError):
        parse_witness(W1445.replace("E3 = t^3 e3\n", ""))
    # a truncated basis parses as a smaller witness and fails verification
    w = parse_witness(W1445.replace("E5 = t^3 e5\n", ""))
    rep = verify_witness(w)
    assert w.dim == 4 and rep.status == "fail" and rep.checks[-1].name == "parametric-index"


def test_condition_examples():
    cs = parse_conditions(CONDITION_SOURCES["R_mu15"])
    assert (len(cs.containments), len(cs.polys)) == (3, 2)
    assert sum(c.zero for c in cs.containments) == 1
    cs = parse_conditions("conditions x\nc(1,4,5) = c(4,1,5)\n")
    assert len(cs.polys) == 1 and not cs.containments
    with pytest.raises(NonHomogeneousClause):
        parse_conditions("conditions x\nc(1,1,3) = 1\n")
    with pytest.raises(ParseError):
        parse_conditions("conditions x\nc(1,1,3) = 1\n")


def test_chain_splits_into_pairs():
    cs = parse_conditions("conditions x\nc(1,1,3) = c(1,2,3) = c(2,1,3)\n")
    assert len(cs.polys) == 2


def test_scalars():
    assert parse_scalar("-1/2") == GaussianRational(-1, 0, 2)
    assert parse_scalar("+i") == GaussianRational(0, 1)
    assert parse_scalar("(1 - i)/3") == GaussianRational(1, -1, 3)
    assert parse_ratfunc("(s^2 + 1)/4") == (RatFunc.s() ** 2 + 1) / 4


@pytest.mark.parametrize("name", list(ALGEBRA_SOURCES))
def test_algebra_round_trip(name):
    tpl = catalog_template(name)
    text = serialize_algebra(tpl)
    assert parse_algebra_template(text) == tpl
    assert serialize_algebra(parse_algebra_template(text)) == text
    if not tpl.params:
        A = catalog_get(name)
        assert parse_algebra(serialize_algebra(A, name)) == A


@pytest.mark.parametrize("key", list(WITNESS_SOURCES))
def test_witness_round_trip(key):
    w = catalog_witness(key)
    text = serialize_witness(w)
    assert parse_witness(text) == w
    assert serialize_witness(parse_witness(text)) == text


@pytest.mark.parametrize("key", list(CONDITION_SOURCES))
def test_condition_round_trip(key):
    for variant in ("literal", "corrected"):
        cs = catalog_condition_set(key, variant)
        text = serialize_conditions(cs)
        back = parse_conditions(text)
        assert back.containments == cs.containments and back.polys == cs.polys
        assert back.mode == cs.mode and back.rebase == cs.rebase
        assert serialize_conditions(back) == text


CORPUS = [A133, W1445] + [CONDITION_SOURCES[k] for k in ("R_mu11", "R_mu20", "R_mu21_plus_i")] + [WITNESS_SOURCES["mu18->mu13"]]


def _parse_any(text):
    head = text.lstrip().split(None, 1)[0] if text.strip() else ""
    if head == "degeneration":
        return parse_witness(text)
    if head == "conditions":
        return parse_conditions(text)
    return parse_algebra(text)


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(CORPUS), st.integers(0, 10**9), st.integers(1, 4))
def test_fuzz_token_deletion(text, seed, deletions):
    r = random.Random(seed)
    tokens = text.replace("\n", " \n ").split(" ")
    for _ in range(deletions):
        if tokens:
            del tokens[r.randrange(len(tokens))]
    mutated = " ".join(tokens).replace(" \n ", "\n")
    try:
        _parse_any(mutated)
    except ParseError as exc:
        assert isinstance(exc.span, SourceSpan) and exc.span.line >= 1 and exc.span.col >= 1
    except (ArityError, ValueError, ArithmeticError):
        pass


@settings(max_examples=200, deadline=None)
@given(st.text(alphabet="e0123456789 =+-*/^()c,AsubtE:#i\n", max_size=80))
def test_fuzz_random_text(text):
    for head in ("algebra x dim 5\n", "conditions x\n", "degeneration x\nsource = mu4\ntarget = mu3\n"):
        try:
            _parse_any(head + text)
        except ParseError as exc:
            assert exc.span.line >= 1
        except (ArityError, ValueError, ArithmeticError):
            pass
