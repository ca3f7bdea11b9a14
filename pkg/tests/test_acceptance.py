"""Acceptance criteria 1-8, one test each.

Every test prints a single ``[criterion N] PASS|FAIL ...`` line, also when
run without ``-s``.  ``python tests/test_acceptance.py`` runs the same
checks outside pytest.
"""

from __future__ import annotations

import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import random_invertible  # noqa: E402
from oracles.sympy_derivations import derivation_dim as oracle_der  # noqa: E402
from oracles.sympy_derivations import table_from  # noqa: E402
from nildegen.algebra import annihilator, change_basis, derivation_dim, fingerprint, in_Unk  # noqa: E402
from nildegen.catalog import (  # noqa: E402
    ALGEBRA_SOURCES,
    CONDITION_SOURCES,
    NAMESAKES,
    TYPO_EXPONENTS,
    WITNESS_SOURCES,
    catalog_condition_set,
    catalog_get,
    catalog_scale_witnesses,
    catalog_template,
    catalog_witness,
    concrete_algebra_names,
    condition_variants,
)
from nildegen.cli import ledger_jobs, run  # noqa: E402
from nildegen.conditions import eval_conditions, search_basis  # noqa: E402
from nildegen.degeneration import _GENERIC_POINTS, necessary_battery, verify_witness  # noqa: E402
from nildegen.dsl import (  # noqa: E402
    parse_algebra_template,
    parse_conditions,
    parse_witness,
    serialize_algebra,
    serialize_conditions,
    serialize_witness,
)
from nildegen.families import h_family, sample_random, v32  # noqa: E402
from nildegen.linalg import inverse  # noqa: E402
from nildegen.scalars import GaussianRational, PoleError, RatFunc, as_ratfunc  # noqa: E402
from nildegen.syntax import ParseError  # noqa: E402

G = GaussianRational


def _report(n: int, ok: bool, detail: str, capsys=None) -> None:
    line = f"[criterion {n}] {'PASS' if ok else 'FAIL'}: {detail}"
    if capsys is not None:
        with capsys.disabled():
            print("\n" + line)
    else:
        print(line)


def _rational(rng: random.Random, bound: int = 10**4) -> GaussianRational:
    while True:
        q = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        if q not in (0, 1, -1):
            return G(q.numerator, 0, q.denominator)


# ---------------------------------------------------------------------------


def check_1():
    t0 = time.perf_counter()
    code, rep = run(["components", "--n", "5", "--flavor", "all"])
    elapsed = time.perf_counter() - t0
    want = {"components": [{"k": 1, "dim": 20}, {"k": 2, "dim": 24}, {"k": 3, "dim": 18}], "variety_dim": 24}
    ok = code == 0 and rep == want and elapsed < 1
    return ok, f"components n=5: {rep['components']}, variety dim {rep['variety_dim']} ({elapsed:.3f} s)"


def check_2():
    t0 = time.perf_counter()
    bad = []
    for n in range(2, 11):
        for seed in range(5):
            rng = random.Random(1000 * n + seed)
            lams = []
            while len(lams) < n // 2:
                x = _rational(rng)
                if x not in lams:
                    lams.append(x)
            d = derivation_dim(h_family(n, lams))
            if d != 3 * n // 2 + 1 or (n + 1) ** 2 - d + n // 2 != n * (n + 1):
                bad.append((n, seed, d))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 10
    return ok, f"H family n=2..10 x 5 seeds, dim Der = floor(3n/2)+1; mismatches {bad} ({elapsed:.2f} s)"


def check_3():
    t0 = time.perf_counter()
    jobs = ledger_jobs(samples=5, seed=2024)
    failed = []
    for key, params in jobs:
        rep = verify_witness(catalog_witness(key), params)
        if not rep.passed:
            failed.append((key, params, rep.checks[-1].name))
    elapsed = time.perf_counter() - t0
    ok = not failed and len(WITNESS_SOURCES) == 21 and elapsed < 60
    return ok, f"{len(jobs) - len(failed)}/{len(jobs)} verifications over 21 witnesses, failures {failed} ({elapsed:.2f} s)"


# family name, parameter names, component dimension, number of independent parameters
_FAMILIES = [
    ("lambda6", ("a",), 20, 1),
    ("mu22", ("a",), 20, 1),
    ("a133", ("l",), 18, 1),
    ("v32", ("l", "m1", "m2", "m3", "m4", "m5", "m6", "m7"), 24, 6),
    ("v41", ("l", "m"), 20, 2),
]


def _family(name, params):
    if name == "v32":
        return v32(*(params[p] for p in ("l", "m1", "m2", "m3", "m4", "m5", "m6", "m7")))
    return catalog_get(name, params)


def check_4():
    fixed = {"mu1_4_5": 5, "mu11": 5, "mu15": 5, "mu17": 5, "mu18": 5, "mu20": 5, "mu21_plus_i": 6, "mu21_minus_i": 6}
    got = {}
    wrong = []
    for name, want in fixed.items():
        A = catalog_get(name)
        d = derivation_dim(A)
        got[name] = d
        if d != want or oracle_der(table_from(A), 5) != d:
            wrong.append(name)
    rng = random.Random(44)
    records = {}
    for name, pnames, comp, k in _FAMILIES:
        dims = []
        for i in range(10):
            A = _family(name, {p: _rational(rng) for p in pnames})
            d = derivation_dim(A)
            if i < 2 and oracle_der(table_from(A), 5) != d:
                wrong.append(f"{name} oracle")
            dims.append(d)
        records[name] = sorted(set(dims))
        if any(25 - d + k != comp for d in dims):
            wrong.append(name)
    ok = not wrong
    rec = ", ".join(f"{n}: {v}" for n, v in records.items())
    return ok, f"generic dim Der 5 (x6) and 6 (mu21 +-i); families {rec} match orbit + #params; wrong {wrong}"


_EIGHT = ["R_mu1_4_5", "R_lambda6", "R_mu11", "R_mu15", "R_mu17", "R_mu18", "R_mu20", "R_mu22"]


def _namesake(key, rng):
    name = NAMESAKES[key]
    params = {p: _rational(rng) for p in catalog_template(name).params}
    return catalog_get(name, params)


def _variant_record(rng, trials: int) -> str:
    """Which exponent reading keeps the namesake in and the outsiders out."""
    v23 = catalog_get("a133", {"l": 2})
    outsiders = [catalog_get("mu21_plus_i"), catalog_get("mu21_minus_i"), v23]
    out = []
    for key in TYPO_EXPONENTS:
        good = []
        for variant, cs in condition_variants(key).items():
            own = eval_conditions(_namesake(key, rng), cs)[0]
            others = not any(eval_conditions(B, cs)[0] for B in outsiders if B.label != NAMESAKES[key])
            if own and others and not search_basis(v23, cs, trials=trials, seed=0).found:
                good.append(variant)
        out.append(f"{key}: {'/'.join(good) or 'neither'}")
    return "exponent readings reproducing the satisfaction pattern: " + ", ".join(out)


def check_5(trials: int = 10_000):
    rng = random.Random(55)
    # (a) namesakes under their recorded rebase and mode
    unsatisfied = []
    for key in CONDITION_SOURCES:
        cs = catalog_condition_set(key)
        for _ in range(3 if catalog_template(NAMESAKES[key]).params else 1):
            ok, failing = eval_conditions(_namesake(key, rng), cs)
            if not ok:
                unsatisfied.append(f"{key} ({'; '.join(map(str, failing))})")
                break
    variants = _variant_record(rng, trials)

    # (b) the outsiders in their printed bases
    outsiders = [("mu21_plus_i", catalog_get("mu21_plus_i")), ("mu21_minus_i", catalog_get("mu21_minus_i"))]
    for _ in range(10):
        lam = _rational(rng)
        outsiders.append((f"v23(l={lam})", catalog_get("a133", {"l": lam})))
    printed_hits = []
    for label, A in outsiders:
        for key in _EIGHT:
            if eval_conditions(A, catalog_condition_set(key), apply_rebase=False)[0]:
                printed_hits.append(f"{label}:{key}")

    # (c) randomized search
    found = {}  # family -> {hit: number of instances}
    for label, A in outsiders:
        for key in _EIGHT:
            r = search_basis(A, catalog_condition_set(key), trials=trials, seed=0)
            if r.found:
                hits = found.setdefault(label.split("(")[0], {})
                hit = f"{key}@{r.trial}"
                hits[hit] = hits.get(hit, 0) + 1
    summary = "; ".join(
        f"{fam}: " + ", ".join(f"{h} (x{c})" for h, c in hits.items()) for fam, hits in found.items()
    )
    ok = not unsatisfied and not printed_hits and not found
    detail = (
        f"{len(CONDITION_SOURCES)} sets, namesakes unsatisfied: {', '.join(unsatisfied) or 'none'}; "
        f"printed-basis hits: {', '.join(printed_hits) or 'none'}; "
        f"search ({trials} trials) found bases for {summary or 'none'}; {variants}"
    )
    return ok, detail


def _source_at(w, params, point):
    """Source algebra of a witness at s = point, or None at a pole."""
    s = RatFunc.s()
    env = {**params, "s": s}
    env["t"] = as_ratfunc(w.basis.subst.evaluate(env))
    src = catalog_get(w.source, {name: e.evaluate(env) for name, e in w.source_params})
    try:
        return src.evaluate(point)
    except PoleError:
        return None


def check_6():
    bad = []
    count = 0
    for key, params in ledger_jobs(samples=5, seed=66):
        w = catalog_witness(key)
        if not verify_witness(w, params, battery=False).passed:
            bad.append(f"{key} unverified")
            continue
        gparams = {k: G(v) for k, v in params.items()}
        target = catalog_get(w.target, {name: e.evaluate(gparams) for name, e in w.target_params})
        sources = [A for A in (_source_at(w, gparams, p) for p in _GENERIC_POINTS) if A is not None][:3]
        if len(sources) < 3:
            bad.append(f"{key}: only {len(sources)} generic points")
        for A in sources:
            rep = necessary_battery(A, target)
            if rep.refuted:
                bad.append(f"{key}: {rep.summary()}")
        count += 1
    return not bad, f"{count} verified witness instances x 3 generic s: dim A^2 >=, dim ann <=, dim Der <= ; violations {bad or 'none'}"


def check_7():
    bad = []
    for n in (4, 6):
        for seed in range(50):
            A = sample_random(n, 1, "anticommutative", seed)
            if annihilator(A).dim < 2 or in_Unk(A, 1):
                bad.append((n, seed))
    return not bad, f"100 anticommutative samples n in {{4,6}}, k=1: dim ann >= 2 and not in U(n,1); violations {bad or 'none'}"


def check_8():
    rng = random.Random(88)
    problems = []
    names = concrete_algebra_names()
    for name in names:
        A = catalog_get(name)
        fp = fingerprint(A)
        for _ in range(50):
            P = random_invertible(A.dim, rng, -2, 2)
            B = change_basis(A, P)
            if fingerprint(B) != fp:
                problems.append(f"fingerprint {name}")
                break
        P = random_invertible(A.dim, rng, -2, 2, gaussian=True)
        if change_basis(change_basis(A, P), inverse(P)) != A:
            problems.append(f"round trip {name}")
    for w in catalog_scale_witnesses():
        if not verify_witness(w).passed:
            problems.append(f"scale {w.label}")
    for name in ALGEBRA_SOURCES:
        tpl = catalog_template(name)
        if parse_algebra_template(serialize_algebra(tpl)) != tpl:
            problems.append(f"parse {name}")
    for key in WITNESS_SOURCES:
        w = catalog_witness(key)
        if parse_witness(serialize_witness(w)) != w:
            problems.append(f"parse {key}")
    for key in CONDITION_SOURCES:
        cs = catalog_condition_set(key)
        back = parse_conditions(serialize_conditions(cs))
        if (back.containments, back.polys, back.rebase, back.mode) != (cs.containments, cs.polys, cs.rebase, cs.mode):
            problems.append(f"parse {key}")
    crashes = 0
    texts = [serialize_witness(catalog_witness(k)) for k in list(WITNESS_SOURCES)[:5]]
    texts += [CONDITION_SOURCES[k] for k in list(CONDITION_SOURCES)[:5]]
    texts += [serialize_algebra(catalog_template(n)) for n in list(ALGEBRA_SOURCES)[:5]]
    for i in range(600):
        text = texts[i % len(texts)]
        toks = text.split(" ")
        del toks[rng.randrange(len(toks))]
        mutated = " ".join(toks)
        head = mutated.split(None, 1)[0] if mutated.strip() else ""
        parser = {"degeneration": parse_witness, "conditions": parse_conditions}.get(head, parse_algebra_template)
        try:
            parser(mutated)
        except ParseError as exc:
            if exc.span is None:
                crashes += 1
        except (ValueError, ArithmeticError):
            pass
        except Exception:  # noqa: BLE001
            crashes += 1
    if crashes:
        problems.append(f"{crashes} fuzz crashes")
    return not problems, f"{len(names)} algebras x 50 bases invariant, round trips, scale witnesses, 600 fuzz cases; problems {problems or 'none'}"


CHECKS = {1: check_1, 2: check_2, 3: check_3, 4: check_4, 5: check_5, 6: check_6, 7: check_7, 8: check_8}


def _run(n, capsys):
    ok, detail = CHECKS[n]()
    _report(n, ok, detail, capsys)
    assert ok, detail


def test_criterion_1_component_dimensions(capsys):
    _run(1, capsys)


def test_criterion_2_h_family_derivations(capsys):
    _run(2, capsys)


def test_criterion_3_degeneration_ledger(capsys):
    _run(3, capsys)


def test_criterion_4_derivation_dimensions(capsys):
    _run(4, capsys)


@pytest.mark.slow
def test_criterion_5_condition_sets(capsys):
    _run(5, capsys)


def test_criterion_6_necessary_conditions(capsys):
    _run(6, capsys)


def test_criterion_7_parity(capsys):
    _run(7, capsys)


def test_criterion_8_property_suites(capsys):
    _run(8, capsys)


if __name__ == "__main__":
    failures = 0
    for n in CHECKS:
        ok, detail = CHECKS[n]()
        _report(n, ok, detail)
        failures += not ok
    sys.exit(1 if failures else 0)
