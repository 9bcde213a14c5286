"""
Tests for the command line
"""
import json

import pytest

import minsum_sp
from cli import main
from core import Instance, serialize_instance
from minsum_sp import FEASIBLE, INFEASIBLE


@pytest.fixture
def intro_file(tmp_path, capsys):
    assert main(["gen", "intro"]) == 0
    path = tmp_path / "intro.json"
    path.write_text(capsys.readouterr().out, encoding="utf-8")
    return path


def _run(capsys, argv):
    code = main(argv)
    return code, capsys.readouterr().out


def test_gen_writes_instance_document(intro_file):
    document = json.loads(intro_file.read_text(encoding="utf-8"))
    assert document["students"] == ["u1", "u2", "u3", "u4", "u5"]
    assert [school["id"] for school in document["schools"]] == ["w1", "w2", "w3"]
    assert document["preferences"]["u1"] == ["w1", "w3", "w2"]


def test_gen_random_is_reproducible(capsys):
    argv = ["gen", "random", "--students", "6", "--schools", "3", "--seed", "11"]
    first = _run(capsys, argv)
    second = _run(capsys, argv)
    assert first[0] == 0
    assert first == second


def test_stable(intro_file, tmp_path, capsys):
    code, out = _run(capsys, ["stable", "--instance", str(intro_file)])
    assert code == 0
    assert json.loads(out) == {"assignment": {"u1": "w2", "u2": "w1", "u3": "w3"}}

    increase = tmp_path / "increase.json"
    increase.write_text(json.dumps({"increase": {"w1": 2}}), encoding="utf-8")
    code, out = _run(capsys, ["stable", "--instance", str(intro_file), "--increase", str(increase)])
    assert len(json.loads(out)["assignment"]) == 5


def test_check_reports_blocking_pair(intro_file, tmp_path, capsys):
    matching = tmp_path / "matching.json"
    matching.write_text(json.dumps({"assignment": {"u1": "w1", "u2": "w2", "u3": "w3"}}), encoding="utf-8")
    code, out = _run(capsys, ["check", "--instance", str(intro_file), "--matching", str(matching)])
    report = json.loads(out)
    assert code == 0
    assert report["feasible"]
    assert not report["stable"]
    assert report["blocking_pairs"] == [["u4", "w1"]]
    assert report["unmatched"] == ["u4", "u5"]


def test_check_infeasible_matching(intro_file, tmp_path, capsys):
    matching = tmp_path / "matching.json"
    matching.write_text(json.dumps({"assignment": {"u1": "w1", "u4": "w1"}}), encoding="utf-8")
    code, out = _run(capsys, ["check", "--instance", str(intro_file), "--matching", str(matching)])
    assert code == 0
    assert json.loads(out)["feasible"] is False


def test_solve_exact(intro_file, capsys):
    code, out = _run(capsys, ["solve", "--instance", str(intro_file), "--problem", "minsum-sp",
                              "--method", "exact", "--budget", "3"])
    result = json.loads(out)
    assert code == 0
    assert result["status"] == FEASIBLE
    assert result["objective"] == 2
    assert result["increase"] == {"w1": 2, "w2": 0, "w3": 0}
    assert result["certificates"]["stable"] and result["certificates"]["perfect"]


def test_solve_over_budget(intro_file, capsys):
    code, out = _run(capsys, ["solve", "--instance", str(intro_file), "--problem", "minsum-sp", "--budget", "1"])
    assert code == 2
    assert json.loads(out)["status"] == INFEASIBLE


def test_solve_table_and_csv(intro_file, tmp_path, capsys):
    target = tmp_path / "schools"
    code, out = _run(capsys, ["solve", "--instance", str(intro_file), "--problem", "minsum-se",
                              "--format", "table", "--csv", str(target)])
    assert code == 0
    assert "occupancy" in out
    assert (tmp_path / "schools.csv").read_text(encoding="utf-8").startswith("school,capacity,increase")


def test_oracle_efficiency(intro_file, capsys):
    code, out = _run(capsys, ["oracle", "--instance", str(intro_file), "--what", "efficiency"])
    document = json.loads(out)
    assert code == 0
    assert document["efficient"] is False
    assert document["agree"]


def test_oracle_guard(intro_file, capsys):
    code, _ = _run(capsys, ["oracle", "--instance", str(intro_file), "--what", "enumerate-stable",
                            "--guard", "10"])
    assert code == 3


@pytest.mark.parametrize("argv", [
    ["solve", "--instance", "missing.json", "--problem", "minsum-sp"],
    ["solve", "--problem", "minsum-sp"],
    ["gen", "vertex-cover"],
    ["frobnicate"],
])
def test_usage_errors(argv, capsys):
    assert main(argv) == 1


def test_method_must_fit_problem(intro_file, capsys):
    assert main(["solve", "--instance", str(intro_file), "--problem", "minmax-sp", "--method", "exact"]) == 1


def test_help_exits_cleanly(capsys):
    assert main(["--help"]) == 0


@pytest.mark.parametrize("example, problem, budget, code, objective", [
    ("problems", "minsum-sp", "3", 0, 3),
    ("stable-eff", "minsum-se", "1", 2, None),
    ("problems", "minmax-sp", "2", 0, 2),
    ("stable-eff", "minmax-se", "1", 0, 1),
])
def test_solve_examples(example, problem, budget, code, objective, tmp_path, capsys):
    assert main(["gen", example]) == 0
    path = tmp_path / f"{example}.json"
    path.write_text(capsys.readouterr().out, encoding="utf-8")
    status, out = _run(capsys, ["solve", "--instance", str(path), "--problem", problem, "--budget", budget])
    assert status == code
    if objective is not None:
        assert json.loads(out)["objective"] == objective


def test_solve_auto_compares_realized_norm_with_budget(tmp_path, capsys):
    preferences = {
        "u1": ["w1", "w3", "w2"], "u2": ["w2", "w1", "w3"], "u3": ["w2", "w3"], "u4": ["w1"], "u5": ["w1"],
    }
    priorities = {"w1": ["u2", "u4", "u1", "u5"], "w2": ["u1", "u2", "u3"], "w3": ["u3", "u1", "u2"]}
    instance = Instance.build(["u1", "u2", "u3", "u4", "u5"], ["w1", "w2", "w3"], 1, preferences, priorities)
    path = tmp_path / "single-choice.json"
    path.write_text(serialize_instance(instance), encoding="utf-8")
    code, out = _run(capsys, ["solve", "--instance", str(path), "--problem", "minsum-sp", "--budget", "2"])
    result = json.loads(out)
    assert code == 0
    assert result["status"] == FEASIBLE
    assert result["objective"] == 2
    assert result["increase"] == {"w1": 2, "w2": 0, "w3": 0}
    assert result["details"]["upper_bound"] == 3


def test_solve_rejects_uncertified_witness(intro_file, monkeypatch, capsys):
    monkeypatch.setattr(minsum_sp, "realize", lambda ctx, inst, vector: (
        inst.matching({"u1": "w1", "u2": "w3", "u3": "w2", "u4": "w1", "u5": "w1"}),
        inst.increase({"w1": 2}),
    ))
    code, out = _run(capsys, ["solve", "--instance", str(intro_file), "--problem", "minsum-sp",
                              "--method", "formula"])
    assert code == 1
    assert out == ""
