"""Command line front end.

Exit codes: 0 success or pass, 1 fail or refuted, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .algebra import Algebra, derivation_dim, fingerprint
from .catalog import (
    ALGEBRA_SOURCES,
    CONDITION_SOURCES,
    WITNESS_SOURCES,
    UnknownName,
    catalog_condition_set,
    catalog_entries,
    catalog_get,
    catalog_template,
    catalog_witness,
)
from .conditions import ConditionSet, ProductMode, eval_conditions, search_basis
from .degeneration import DegenerationWitness, necessary_battery, verify_witness
from .dsl import (
    AlgebraTemplate,
    format_products,
    parse_algebra,
    parse_conditions,
    parse_scalar,
    parse_witness,
    serialize_algebra,
    serialize_conditions,
    serialize_witness,
)
from .families import ArityMismatch, Flavor, UnknownFamily, components, sample_random
from .kernels import BACKEND
from .scalars import ZERO, GaussianRational, format_gaussian
from .syntax import ParseError

GRAMMAR = """\
references:
  <alg>   file path, or catalog:NAME[?param=value,...]   e.g. catalog:mu21?branch=+i
  <wit>   file path, or catalog:KEY                       e.g. catalog:mu4->mu3
  <cond>  file path, or catalog:KEY                       e.g. catalog:R_mu11

algebra file:
  algebra <name> dim <n> [params <p>...]
  e<i> e<j> = 0 | [coeff*]e<k> (+|- [coeff*]e<k>)*

witness file:
  degeneration <name> [params <p>...]
  source = <name> [with <p> = <expr in t>, ...]
  target = <name> [with <p> = <expr>, ...]
  [subst t = <expr in s>]   [point s0 = <scalar>]   [exclude <expr>]...
  basis:
  E1 = <sum of coeff*e<k>> ... En = ...

condition file:
  conditions <name> [dim <n>] [mode one_sided|symmetric] [rebase e<i1> ... e<in>]
  <subexpr> sub A<k>  |  <subexpr> = 0  |  <poly> = <poly>
  [E<i> = <vector>]...      explicit basis instead of a permutation
"""


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# references


def _split_ref(ref: str):
    body = ref[len("catalog:") :]
    name, _, query = body.partition("?")
    params = {}
    if query:
        for part in query.split(","):
            if not part:
                continue
            key, eq, val = part.partition("=")
            if not eq:
                raise UsageError(f"bad parameter {part!r} in {ref!r}; expected name=value")
            params[key.strip()] = val.strip()
    return name, params


def _coerce_params(params: dict) -> dict:
    out = {}
    for k, v in params.items():
        if k in ("branch", "flavor"):
            out[k] = v
        elif v.lstrip("-").isdigit() and k in ("n", "k", "seed"):
            out[k] = int(v)
        else:
            out[k] = parse_scalar(v)
    return out


def _read(path: str) -> str:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"no such file: {path}")
    return p.read_text(encoding="utf-8")


def load_algebra(ref: str) -> Algebra:
    if ref.startswith("catalog:"):
        name, params = _split_ref(ref)
        return catalog_get(name, _coerce_params(params))
    path, _, query = ref.partition("?")
    alg = parse_algebra(_read(path), file=path)
    if isinstance(alg, AlgebraTemplate):
        _, params = _split_ref("catalog:x?" + query)
        alg = alg.bind(_coerce_params(params))
    return alg


def load_witness(ref: str) -> DegenerationWitness:
    if ref.startswith("catalog:"):
        return catalog_witness(ref[len("catalog:") :])
    return parse_witness(_read(ref), file=ref)


def load_conditions(ref: str) -> ConditionSet:
    if ref.startswith("catalog:"):
        key, params = _split_ref(ref)
        return catalog_condition_set(key, params.get("variant"))
    return parse_conditions(_read(ref), file=ref)


def _parse_kv(items) -> dict:
    out = {}
    for item in items or ():
        k, eq, v = item.partition("=")
        if not eq:
            raise UsageError(f"expected name=value, got {item!r}")
        out[k.strip()] = parse_scalar(v)
    return out


# ---------------------------------------------------------------------------
# commands; each returns (exit code, report dict, text)


def cmd_info(args):
    A = load_algebra(args.alg)
    fp = fingerprint(A).as_dict()
    report = {"algebra": args.alg, "label": A.label, "fingerprint": fp, "table": format_products(A).splitlines()}
    lines = [f"{args.alg}: dim {A.dim}"] + [f"  {k}: {v}" for k, v in fp.items()]
    lines += ["  products:"] + [f"    {ln}" for ln in report["table"]]
    return 0, report, "\n".join(lines)


def cmd_der(args):
    A = load_algebra(args.alg)
    d = derivation_dim(A)
    report = {"algebra": args.alg, "der": d, "orbit_dim": A.dim * A.dim - d}
    return 0, report, str(d)


def cmd_verify_deg(args):
    w = load_witness(args.witness)
    r = verify_witness(w, _parse_kv(args.param))
    text = [f"{w.label}: {r.status}"] + [f"  [{c.status}] {c.name}: {c.detail}" for c in r.checks]
    return (0 if r.passed else 1), r.as_dict(), "\n".join(text)


def _ledger_job(job):
    key, params = job
    w = catalog_witness(key)
    r = verify_witness(w, params)
    return key, r.as_dict()


def ledger_jobs(samples: int, seed: int) -> list:
    rng = np.random.default_rng(seed)
    jobs = []
    for key in WITNESS_SOURCES:
        w = catalog_witness(key)
        if not w.params:
            jobs.append((key, {}))
            continue
        count = 0
        while count < samples:
            p = {name: int(rng.integers(-9, 10)) for name in w.params}
            if any(v in (0, 1, -1) for v in p.values()):
                continue
            env = {k: GaussianRational(v) for k, v in p.items()}
            if any(ex.evaluate(env) == ZERO for ex in w.exclusions):
                continue
            jobs.append((key, p))
            count += 1
    return jobs


def cmd_verify_ledger(args):
    jobs = ledger_jobs(args.samples, args.seed)
    if args.parallel and args.parallel > 1:
        with ProcessPoolExecutor(max_workers=args.parallel) as ex:
            results = list(ex.map(_ledger_job, jobs))
    else:
        results = [_ledger_job(j) for j in jobs]
    items = []
    lines = []
    for (key, params), (_, rep) in zip(jobs, results):
        items.append({"key": key, "params": {k: str(v) for k, v in params.items()}, "report": rep})
        ptxt = ", ".join(f"{k}={v}" for k, v in params.items())
        lines.append(f"{rep['status']:4s}  {key}" + (f"  [{ptxt}]" if ptxt else ""))
    passed = sum(1 for it in items if it["report"]["status"] == "pass")
    status = "pass" if passed == len(items) else "fail"
    lines.append(f"{passed}/{len(items)} verifications passed ({len(WITNESS_SOURCES)} witnesses)")
    report = {"status": status, "witnesses": len(WITNESS_SOURCES), "passed": passed, "total": len(items), "items": items}
    return (0 if status == "pass" else 1), report, "\n".join(lines)


def cmd_necessary(args):
    A, B = load_algebra(args.a), load_algebra(args.b)
    r = necessary_battery(A, B)
    report = {"source": args.a, "target": args.b, **r.as_dict()}
    return (1 if r.refuted else 0), report, r.summary()


def _mode(args):
    return ProductMode(args.mode) if getattr(args, "mode", None) else None


def cmd_check_cond(args):
    A = load_algebra(args.alg)
    cs = load_conditions(args.cond)
    ok, failing = eval_conditions(A, cs, mode=_mode(args), apply_rebase=not args.no_rebase)
    mode = _mode(args) or cs.mode
    report = {"algebra": args.alg, "conditions": cs.label, "mode": mode.value, "satisfied": ok, "failing": failing}
    text = f"{cs.label}: {'satisfied' if ok else 'not satisfied'}"
    if failing:
        text += "\n" + "\n".join(f"  fails: {f}" for f in failing)
    return (0 if ok else 1), report, text


def cmd_search_basis(args):
    A = load_algebra(args.alg)
    cs = load_conditions(args.cond)
    r = search_basis(A, cs, trials=args.trials, seed=args.seed, mode=_mode(args))
    basis = [[format_gaussian(x) for x in row] for row in r.basis] if r.found else None
    report = {
        "algebra": args.alg,
        "conditions": cs.label,
        "found": r.found,
        "trial": r.trial,
        "trials": r.trials,
        "survivors": r.survivors,
        "seed": r.seed,
        "basis": basis,
    }
    if r.found:
        text = f"found at trial {r.trial}:\n" + "\n".join("  [" + ", ".join(row) + "]" for row in basis)
    else:
        text = f"not found in {r.trials} trials (seed {r.seed}); this is evidence, not a proof"
    return (0 if r.found else 1), report, text


def cmd_components(args):
    rep = components(args.n, Flavor.parse(args.flavor))
    report = {"components": [{"k": c.k, "dim": c.dim} for c in rep.components], "variety_dim": rep.variety_dim}
    lines = [f"k={c.k}: dim {c.dim}" for c in rep.components]
    lines.append(f"variety dim {rep.variety_dim}")
    if rep.range.inconsistent:
        lines.append(f"note: formula range {list(rep.range.ks)} differs from direct bound {list(rep.range.direct)}")
    return 0, report, "\n".join(lines)


def cmd_catalog(args):
    if args.action == "list":
        ents = catalog_entries()
        items = [{"name": e.name, "kind": e.kind, "params": list(e.params), "note": e.note} for e in ents]
        text = "\n".join(f"{e.kind:13s} {e.name}" + (f"({', '.join(e.params)})" if e.params else "") for e in ents)
        return 0, {"entries": items}, text
    if not args.name:
        raise UsageError("catalog show needs a name")
    name = args.name
    if name in ALGEBRA_SOURCES:
        text = serialize_algebra(catalog_template(name))
        kind = "algebra"
    elif name in WITNESS_SOURCES:
        text = serialize_witness(catalog_witness(name))
        kind = "witness"
    elif name in CONDITION_SOURCES:
        text = serialize_conditions(catalog_condition_set(name))
        kind = "condition_set"
    else:
        A = catalog_get(name)
        text = serialize_algebra(A, name)
        kind = "algebra"
    return 0, {"name": name, "kind": kind, "text": text}, text.rstrip("\n")


def cmd_sample(args):
    A = sample_random(args.n, args.k, Flavor.parse(args.flavor), args.seed)
    text = serialize_algebra(A, f"s{args.n}_{args.k}")
    report = {"n": args.n, "k": args.k, "flavor": args.flavor, "seed": args.seed, "text": text, "fingerprint": fingerprint(A).as_dict()}
    return 0, report, text.rstrip("\n")


# ---------------------------------------------------------------------------
# parser


def _common(p, top=False):
    d = None if top else argparse.SUPPRESS
    p.add_argument("--json", action="store_true", default=False if top else argparse.SUPPRESS, help="machine-readable output")
    p.add_argument("--parallel", type=int, default=1 if top else argparse.SUPPRESS, metavar="W", help="worker processes")
    p.add_argument("--mode", choices=[m.value for m in ProductMode], default=d, help="override product mode")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n\n{GRAMMAR}")
        raise SystemExit(2)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nildegen", description="Nilpotent algebra degenerations and condition sets.", epilog=GRAMMAR,
                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({BACKEND} kernels)")
    _common(p, top=True)
    sub = p.add_subparsers(dest="command", parser_class=_Parser, metavar="COMMAND")

    s = sub.add_parser("info", help="invariants of an algebra")
    s.add_argument("alg")
    s.set_defaults(func=cmd_info)
    s = sub.add_parser("der", help="dimension of the derivation algebra")
    s.add_argument("alg")
    s.set_defaults(func=cmd_der)
    s = sub.add_parser("verify-deg", help="verify one degeneration witness")
    s.add_argument("witness")
    s.add_argument("--param", action="append", metavar="NAME=VALUE", help="bind a witness parameter")
    s.set_defaults(func=cmd_verify_deg)
    s = sub.add_parser("verify-ledger", help="verify every catalog witness")
    s.add_argument("--samples", type=int, default=5, help="parameter samples per parameterized witness")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_verify_ledger)
    s = sub.add_parser("necessary", help="invariant battery for a putative degeneration A -> B")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_necessary)
    s = sub.add_parser("check-cond", help="evaluate a condition set")
    s.add_argument("alg")
    s.add_argument("cond")
    s.add_argument("--no-rebase", action="store_true", help="evaluate in the printed basis")
    s.set_defaults(func=cmd_check_cond)
    s = sub.add_parser("search-basis", help="randomized search for a satisfying basis")
    s.add_argument("alg")
    s.add_argument("cond")
    s.add_argument("--trials", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_search_basis)
    s = sub.add_parser("components", help="irreducible component dimensions of the 2-step varieties")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--flavor", default="all", help="all, commutative or anticommutative")
    s.set_defaults(func=cmd_components)
    s = sub.add_parser("catalog", help="list or show catalog entries")
    s.add_argument("action", choices=["list", "show"])
    s.add_argument("name", nargs="?")
    s.set_defaults(func=cmd_catalog)
    s = sub.add_parser("sample", help="random algebra from a component")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--flavor", default="all")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_sample)
    for sp_ in sub.choices.values():
        _common(sp_)
    return p


def _emit(report: dict, text: str, as_json: bool, stream=None) -> None:
    stream = stream or sys.stdout
    if as_json:
        stream.write(json.dumps(report, sort_keys=False) + "\n")
    else:
        stream.write(text + "\n")


def run(argv=None) -> tuple:
    """(exit code, report) without exiting; used by main and the tests."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "command", None):
        parser.print_help(sys.stderr)
        return 2, {"command": None, "error": "missing command", "kind": "usage"}
    try:
        if getattr(args, "trials", 1) < 1:
            raise UsageError("--trials must be at least 1")
        code, report, text = args.func(args)
    except ParseError as exc:
        s = exc.span
        report = {"command": args.command, "error": exc.message, "kind": "parse", "span": {"file": s.file, "line": s.line, "col": s.col, "end_col": s.end_col}}
        _emit(report, f"error: {exc}", args.json, sys.stderr if not args.json else None)
        return 2, report
    except (UsageError, UnknownName, UnknownFamily, ArityMismatch, ValueError) as exc:
        msg = str(exc)
        report = {"command": args.command, "error": msg, "kind": "usage"}
        _emit(report, f"error: {msg}\n\n{GRAMMAR}", args.json, sys.stderr if not args.json else None)
        return 2, report
    if args.command != "components":
        report = {"command": args.command, **report}
    _emit(report, text, args.json)
    return code, report


def main(argv=None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
