import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from nildegen.cli import GRAMMAR, main, run


def schema(name):
    return json.loads(resources.files("nildegen").joinpath("schemas", f"{name}.schema.json").read_text())


def call(capsys, *argv):
    code = main(["--json", *argv])
    out, err = capsys.readouterr()
    return code, json.loads(out) if out.strip() else None, err


IDENTITY = """degeneration ident
source = mu1
target = mu2
basis:
E1 = e1
E2 = e2
E3 = e3
E4 = e4
E5 = e5
"""


def test_components_exact_output(capsys):
    assert main(["components", "--n", "5", "--flavor", "all", "--json"]) == 0
    out = capsys.readouterr().out
    assert out.strip() == '{"components": [{"k": 1, "dim": 20}, {"k": 2, "dim": 24}, {"k": 3, "dim": 18}], "variety_dim": 24}'
    assert json.loads(out) == {"components": [{"k": 1, "dim": 20}, {"k": 2, "dim": 24}, {"k": 3, "dim": 18}], "variety_dim": 24}


def test_der_mu21(capsys):
    assert main(["der", "catalog:mu21?branch=+i"]) == 0
    assert capsys.readouterr().out.strip() == "6"


def test_verify_identity_file_fails(tmp_path, capsys):
    f = tmp_path / "ident.deg"
    f.write_text(IDENTITY)
    code, rep, _ = call(capsys, "verify-deg", str(f))
    assert code == 1 and rep["status"] == "fail"
    jsonschema.validate(rep, schema("verify-deg"))


CASES = [
    ("info", ["info", "catalog:mu11"], 0),
    ("info", ["info", "catalog:lambda6?a=1/2"], 0),
    ("der", ["der", "catalog:mu0_5"], 0),
    ("verify-deg", ["verify-deg", "catalog:mu18->mu13"], 0),
    ("verify-deg", ["verify-deg", "catalog:mu22(a)->mu8(a)", "--param", "a=3"], 0),
    ("necessary", ["necessary", "catalog:mu4", "catalog:mu3"], 0),
    ("necessary", ["necessary", "catalog:zero5", "catalog:mu0_5"], 1),
    ("check-cond", ["check-cond", "catalog:mu11", "catalog:R_mu11"], 0),
    ("check-cond", ["check-cond", "catalog:mu21?branch=-i", "catalog:R_mu11", "--no-rebase"], 1),
    ("check-cond", ["--mode", "symmetric", "check-cond", "catalog:A4_05", "catalog:R_A4_05"], 0),
    ("search-basis", ["search-basis", "catalog:zero5", "catalog:R_mu11", "--trials", "1"], 0),
    ("search-basis", ["search-basis", "catalog:mu21?branch=+i", "catalog:R_mu1_4_5", "--trials", "300"], 1),
    ("components", ["components", "--n", "6", "--flavor", "anticommutative"], 0),
    ("catalog-list", ["catalog", "list"], 0),
    ("catalog-show", ["catalog", "show", "mu20"], 0),
    ("catalog-show", ["catalog", "show", "mu4->mu3"], 0),
    ("catalog-show", ["catalog", "show", "R_mu21_plus_i"], 0),
    ("sample", ["sample", "--n", "5", "--k", "2", "--flavor", "commutative", "--seed", "3"], 0),
]


@pytest.mark.parametrize("name,argv,expected", CASES)
def test_reports_validate(name, argv, expected, capsys):
    code, rep, _ = call(capsys, *argv)
    assert code == expected
    jsonschema.validate(rep, schema(name))
    if name != "components":
        assert rep["command"] == argv[0] if not argv[0].startswith("--") else rep["command"] == argv[2]


def test_verify_ledger(capsys):
    code, rep, _ = call(capsys, "verify-ledger", "--samples", "2")
    assert code == 0 and rep["witnesses"] == 21 and rep["passed"] == rep["total"]
    jsonschema.validate(rep, schema("verify-ledger"))


def test_verify_ledger_parallel_is_ordered(capsys):
    _, serial, _ = call(capsys, "verify-ledger", "--samples", "2")
    _, parallel, _ = call(capsys, "--parallel", "2", "verify-ledger", "--samples", "2")
    assert [i["key"] for i in serial["items"]] == [i["key"] for i in parallel["items"]]
    assert serial == parallel


def test_parse_error_exit(tmp_path, capsys):
    f = tmp_path / "bad.alg"
    f.write_text("algebra x dim 5\ne1 e1 = e9\n")
    code, rep, _ = call(capsys, "der", str(f))
    assert code == 2 and rep["kind"] == "parse" and rep["span"]["line"] == 2
    jsonschema.validate(rep, schema("error"))
    code = main(["der", str(f)])
    err = capsys.readouterr().err
    assert code == 2 and "bad.alg:2:" in err


@pytest.mark.parametrize("argv", [["der", "catalog:nope"], ["der", "catalog:mu22"], ["der", "/no/such/file"], ["search-basis", "catalog:mu4", "catalog:R_mu11", "--trials", "0"]])
def test_usage_errors(argv, capsys):
    code, rep, _ = call(capsys, *argv)
    assert code == 2 and rep["kind"] == "usage"
    jsonschema.validate(rep, schema("error"))
    assert main(argv) == 2
    assert "references:" in capsys.readouterr().err


def test_argparse_errors_print_grammar(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["components"])
    assert exc.value.code == 2
    assert GRAMMAR.splitlines()[0] in capsys.readouterr().err


def test_algebra_file_with_params(tmp_path, capsys):
    f = tmp_path / "a.alg"
    f.write_text("algebra a133 dim 5 params l\ne1 e1 = e3 + l*e5\ne1 e2 = e3\ne2 e1 = e4\ne2 e2 = e5\n")
    code, rep, _ = call(capsys, "der", f"{f}?l=2")
    assert code == 0 and rep["der"] == 8


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "nildegen", "der", "catalog:mu1_4_5"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip() == "5"


def test_schemas_are_valid():
    for name in ("info", "der", "verify-deg", "verify-ledger", "necessary", "check-cond", "search-basis", "components", "catalog-list", "catalog-show", "sample", "error"):
        jsonschema.Draft202012Validator.check_schema(schema(name))
