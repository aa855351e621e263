import json
import os
from importlib import resources

import jsonschema
import pytest

from typact.cli import main, run

ACTION8 = json.dumps({"q": 8, "generators": [{"order": "inf", "permutation": [4, 5, 6, 7, 8, 1, 2, 3]}]})
P4 = json.dumps({"q": 4, "generators": [{"order": 4, "permutation": [2, 3, 4, 1]}]})

GOLDEN = [
    (["classify", "extend-free", "(Z/2)^inf", "(Z/2)^inf + Z/3"], {"answer": "no", "rule": "bounded-mbar-differ"}),
    (["classify", "monothetic", "T(2)"], {"answer": "yes", "rule": "G-unbounded"}),
    (["classify", "embeds", "Z/4", "Z/2 + Z/2"], {"answer": "no", "rule": "socle-hall"}),
    (["classify", "weak-iso", "(Z/2)^inf + (Z/4)^inf", "(Z/4)^inf"], {"answer": "yes"}),
    (["classify", "extend-any", "(Z/2)^inf", "(Z/2)^inf + Z/3"], {"answer": "yes", "witness": "(Z/2)^inf"}),
    (["dual", "ann", "--group", "4", "--gens", "2"], {"order_product": 4}),
    (["dual", "spectral", "--group", "6", "--h", "2", "--k", "3"], {}),
    (["dual", "spectrum", "--group", "4", "--target", "2", "--images", "1"], {}),
    (["oracle", "subgroups", "Z/2 + Z/2"], {"count": 5}),
    (["oracle", "embeds", "Z/4", "Z/2 + Z/2"], {}),
    (["chacon", "select"], {"gamma": 1}),
    (["chacon", "verify", "--gamma", "2"], {"ok": True}),
    (["sim", "metric", "--s", "2,1", "--t", "1,2", "--levels", "geom:2"], {"d": {"a": "0", "b": "1", "approx": 1.6449340668482264}}),
    (["sim", "extend", "--regular", "2", "--k", "2", "--h", "1"], {}),
    (["sim", "lnk", "--orders", "2", "--q", "2"], {"count": 2}),
    (["sim", "lnk", "--orders", "inf", "--q", "9", "--mode", "sample", "--seed", "1", "--count", "3"], {}),
    (["sim", "probe", "--regular", "8", "--levels", "geom:2", "--candidate-levels", "1,2,4", "--seed", "1"], {}),
    (["sim", "defect", "--target", ACTION8, "--p", P4], {}),
    (["sim", "centralizer", "--regular", "5"], {"size": 5, "equals_image": True}),
    (["sim", "witness", "--regular", "6", "--s", "3,4,5,6,1,2"], {"element": [2]}),
    (["sim", "param", "--regular", "2,4"], {"orders": [2, 4]}),
    (["sim", "rge", "--seed", "3"], {}),
]


def schema(name):
    return json.loads(resources.files("typact").joinpath("schemas", name).read_text())


@pytest.fixture(scope="module")
def validator():
    return jsonschema.Draft202012Validator(schema("report.schema.json"))


@pytest.mark.parametrize("argv,expect", GOLDEN, ids=[" ".join(a[:2]) for a, _ in GOLDEN])
def test_golden(argv, expect, validator, capsys):
    code, rep = run(argv + ["--json"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0, rep.get("error")
    assert out == json.loads(json.dumps(rep))
    validator.validate(out)
    for k, v in expect.items():
        assert out["result"][k] == v


@pytest.mark.parametrize("argv", [a for a, _ in GOLDEN if a[0] == "classify"])
def test_decision_schema(argv, capsys):
    _, rep = run(argv + ["--json"])
    capsys.readouterr()
    jsonschema.validate(rep["result"], schema("decision.schema.json"))
    assert rep["rules"] == [rep["result"]["rule"]]


def test_action_schema(capsys):
    _, rep = run(["sim", "centralizer", "--regular", "2,2", "--json"])
    capsys.readouterr()
    jsonschema.validate(rep["inputs"]["action"], schema("action.schema.json"))


def test_chacon_schema():
    data = json.loads(resources.files("typact").joinpath("data", "chacon_sample.json").read_text())
    jsonschema.validate(data, schema("chacon.schema.json"))


def test_deterministic(capsys):
    argv = ["sim", "rge", "--seed", "7", "--json"]
    a, b = run(argv)[1], run(argv)[1]
    capsys.readouterr()
    a.pop("timing"), b.pop("timing")
    assert a == b


@pytest.mark.parametrize(
    "argv,code",
    [
        (["classify", "embeds", "Z/", "Z"], 1),
        (["nonsense"], 1),
        (["classify", "extend-any", "Z^2", "Z"], 2),
        (["sim", "centralizer", "--regular", "11", "--method", "full"], 3),
        (["sim", "lnk", "--orders", "inf", "--q", "9", "--mode", "sample"], 1),
        (["sim", "witness", "--regular", "3", "--s", "2,1,3"], 2),
        (["chacon", "verify", "--gamma", "9"], 2),
    ],
)
def test_exit_codes(argv, code, capsys, validator):
    got, rep = run(argv + ["--json"])
    capsys.readouterr()
    assert got == code
    if rep is not None and argv[0] != "nonsense":
        validator.validate(rep)
        assert rep["error"]["kind"]


def test_human_output(capsys):
    assert main(["classify", "monothetic", "T(2)"]) == 0
    assert "yes" in capsys.readouterr().out


def test_seed_echoed_in_human_mode(capsys):
    assert main(["sim", "lnk", "--orders", "inf", "--q", "9", "--mode", "sample", "--count", "2"]) == 0
    assert "seed" in capsys.readouterr().err


def test_defect_csv(capsys):
    assert main(["sim", "defect", "--target", ACTION8, "--p", P4, "--csv"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 1 + 17


def test_budget_env(capsys, monkeypatch):
    code, _ = run(["sim", "centralizer", "--regular", "8", "--method", "full", "--budget", "full_q=6", "--json"])
    capsys.readouterr()
    assert code == 3


def test_budget_flag_does_not_leak(capsys, monkeypatch):
    monkeypatch.delenv("TYPACT_BUDGET", raising=False)
    run(["sim", "centralizer", "--regular", "4", "--budget", "full_q=2", "--json"])
    capsys.readouterr()
    assert "TYPACT_BUDGET" not in os.environ
