import json

import pytest

from asepchain.cli import main
from asepchain.markov import chain_from_json, measure_from_json
from asepchain.models import build_open_asep3


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_solve_open3(capsys):
    code, out = run(capsys, "solve", "--model", "open3", "--n", "2")
    assert code == 0
    assert json.loads(out.out) == {
        "BB": "alpha^2",
        "BO": "alpha^2*beta + alpha*beta^2 + alpha*beta*q",
        "OB": "alpha*beta",
        "OO": "beta^2",
    }
    assert list(json.loads(out.out)) == ["BB", "BO", "OB", "OO"]


def test_solve_masep_uniform(capsys):
    code, out = run(capsys, "solve", "--model", "masep", "--lambda", "1,0")
    assert json.loads(out.out) == {"01": "1", "10": "1"}


def test_solve_tasep(capsys):
    code, out = run(capsys, "solve", "--model", "tasep", "--lambda", "4,3,2,1")
    data = json.loads(out.out)
    assert data["1234"] == "x1^3*x2"
    assert data["1423"] == "x1^3*x2 + x1^2*x2^2 + x1^2*x2*x3"


def test_solve_at_point(capsys):
    code, out = run(capsys, "solve", "--model", "open3", "--n", "2", "--at", "alpha=1,beta=1,q=1")
    assert json.loads(out.out) == {"BB": 1, "BO": 3, "OB": 1, "OO": 1}


def test_deterministic(capsys):
    _, a = run(capsys, "solve", "--model", "open3", "--n", "3")
    _, b = run(capsys, "solve", "--model", "open3", "--n", "3")
    assert a.out == b.out


@pytest.mark.parametrize("table", [1, 2, 3, 4, 5])
def test_verify_tables(capsys, table):
    code, out = run(capsys, "verify", "--table", str(table))
    assert code == 0
    assert json.loads(out.out)["pass"] is True


def test_verify_tree_ratio(capsys):
    code, out = run(capsys, "verify", "--table", "6", "--max-n", "5")
    data = json.loads(out.out)
    assert code == 0
    assert [c["computed"] for c in data["checks"]] == [1, 4, 840, 2285015040]


def test_export_round_trip(tmp_path, capsys):
    code, _ = run(capsys, "export", "--model", "open3", "--n", "3", "--out", str(tmp_path))
    assert code == 0
    c = chain_from_json(json.loads((tmp_path / "chain.json").read_text()))
    ref = build_open_asep3(3)
    assert c.states == ref.states and c.rates == ref.rates
    m = measure_from_json(json.loads((tmp_path / "measure.json").read_text()), c)
    assert len(m.values) == 8


def test_export_example_and_point(tmp_path, capsys):
    run(capsys, "export", "--model", "example42", "--out", str(tmp_path / "a"))
    assert "2*q^3 + q^2 + q + 2" in (tmp_path / "a" / "measure.json").read_text()
    run(capsys, "export", "--model", "open3", "--n", "3", "--at", "1,1,1",
        "--out", str(tmp_path / "b"))
    values = json.loads((tmp_path / "b" / "measure.json").read_text())["values"]
    assert all(isinstance(v, int) for v in values.values())
    assert sum(values.values()) == 24


def test_tableaux_and_ansatz(capsys):
    _, out = run(capsys, "tableaux", "--n", "3", "--mode", "abgd")
    assert json.loads(out.out)["count"] == 384
    _, out = run(capsys, "tableaux", "--n", "2", "--gf", "--type", "BO")
    assert json.loads(out.out) == {"BO": "alpha^2*beta + alpha*beta^2 + alpha*beta*q"}
    code, out = run(capsys, "ansatz", "--check-relations", "--dim", "5")
    assert code == 0 and json.loads(out.out)["relations_hold"]
    _, out = run(capsys, "ansatz", "--state", "O")
    assert json.loads(out.out) == {"O": "beta"}


def test_trees(capsys):
    _, out = run(capsys, "trees", "--model", "example42", "--root", "1", "--list")
    data = json.loads(out.out)
    assert data["psi_tree"] == "2*q^3 + q^2 + q + 2"
    assert sorted(t["weight"] for t in data["arborescences"]) == ["1", "1", "q", "q^2", "q^3", "q^3"]
    _, out = run(capsys, "trees", "--model", "open3", "--n", "4", "--ratio", "--at", "1,1,1")
    assert json.loads(out.out)["ratio"] == 840


def test_schubert_commands(capsys):
    _, out = run(capsys, "schubert", "--perm", "1432")
    assert json.loads(out.out)["schubert"] == "x1^2*x2 + x1^2*x3 + x1*x2^2 + x1*x2*x3 + x2^2*x3"
    code, out = run(capsys, "verify-kw", "--n", "4")
    report = json.loads(out.out)
    assert [e["status"] for e in report["states"]] == ["found"] * 6
    # the product formula for the total does not hold for these rates
    assert code == 1 and report["ok"] is False


def test_usage_errors(capsys):
    assert run(capsys, "solve", "--model", "open3")[0] == 2
    assert run(capsys, "solve", "--model", "open3", "--n", "2", "--at", "1,1")[0] == 2
    assert run(capsys, "solve", "--model", "masep", "--lambda", "1,2")[0] == 2
    assert run(capsys, "verify", "--table", "9")[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["solve", "--model", "nope"])
    assert info.value.code == 2


def test_text_format(capsys):
    _, out = run(capsys, "solve", "--model", "open3", "--n", "1", "--format", "text")
    assert out.out == "B: alpha\nO: beta\n"
