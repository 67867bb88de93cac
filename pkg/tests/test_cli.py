import json
import subprocess
import sys

import pytest

from uqso import cli, pbw
from uqso.scalar import DeformationParameter

P_ARGS = ["--p=2/1", "--p=3/2", "--p=5/1"]


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    return code, json.loads(out) if out else None


# -- normalize ---------------------------------------------------------------------

@pytest.mark.parametrize("p", P_ARGS)
def test_normalize_matches_library(capsys, p):
    param = DeformationParameter.parse(p.split("=")[1])
    code, data = run_json(capsys, "normalize", "I32 * I21", p)
    assert code == 0
    want = pbw.normal_form(pbw.AlgebraElement.word(3, param, [(3, 2), (2, 1)]))
    assert data["normal_form"] == want.to_json()


def test_normalize_text_at_p2(capsys):
    code, out, _ = run(capsys, "normalize", "I32 * I21")
    assert code == 0 and out.strip() == "(-2)*I31 + (4)*I21*I32"


@pytest.mark.parametrize("p", P_ARGS)
def test_normalize_fixed_points(capsys, p):
    assert run(capsys, "normalize", "I21", p)[1].strip() == "(1)*I21"
    code, out, _ = run(capsys, "normalize", "I21 * I43", "--n", "4", p)
    assert code == 0 and out.strip() == "(1)*I21*I43"


def test_normalize_expression_grammar(capsys):
    code, out, _ = run(capsys, "normalize", "2/3 * qh * I21 - I21 + i * I32")
    assert code == 0
    assert out.strip() == "(1/3)*I21 + (1i)*I32"


@pytest.mark.parametrize("expr", ["I32 *", "* I21", "I21 I32", "I45", "J21", "I21 + + "])
def test_normalize_parse_errors_exit_2(capsys, expr):
    code, _, err = run(capsys, "normalize", expr)
    assert code == 2 and "error" in err


def test_budget_exit_3(capsys, monkeypatch):
    monkeypatch.setenv("UQSO_STEP_BUDGET", "1")
    code, _, err = run(capsys, "normalize", "I54 * I43 * I32 * I21 * I54 * I43", "--n", "5", "--p", "13/11")
    assert code == 3 and "budget" in err


# -- representation commands -----------------------------------------------------------

@pytest.mark.parametrize("p", P_ARGS)
def test_verify_spin_one(capsys, p):
    code, data = run_json(capsys, "verify", "--rep", "so3-classical", "--l", "1", p)
    assert code == 0
    assert data["summary"]["failed"] == 0 and data["summary"]["total"] == 4


def test_verify_with_words(capsys):
    code, data = run_json(capsys, "verify", "--rep", "so4-nonclassical", "--r", "3/2", "--s", "1/2",
                          "--eps=-1,1,-1", "--words", "5", "--seed", "4")
    assert code == 0
    assert sum(c["id"].startswith("compat") for c in data["checks"]) == 5


@pytest.mark.parametrize("p", P_ARGS)
def test_diagram_so4_classical_one_one_has_three_weights(capsys, p):
    code, data = run_json(capsys, "diagram", "--rep", "so4-classical", "--r", "1", "--s", "1", p)
    assert code == 0
    assert data["dim"] == 3 and len(data["weights"]) == 3
    assert data["weyl"]["status"] == "invariant"


def test_diagram_nonclassical_reports_witness(capsys):
    code, data = run_json(capsys, "diagram", "--rep", "so3-nonclassical", "--size", "2")
    assert code == 0 and data["type"] == "nonclassical"
    assert data["weyl"]["status"] == "not-invariant"


@pytest.mark.parametrize("p", P_ARGS)
def test_classify_one_dimensional(capsys, p):
    code, out, _ = run(capsys, "classify", "--rep", "so3-nonclassical", "--size", "1", "--eps=1,1", p)
    assert code == 0
    assert json.loads(out) == {"type": "nonclassical", "m": ["1/2"], "g": [1, 1]}


def test_classify_plus_signs_accepted(capsys):
    code, out, _ = run(capsys, "classify", "--rep", "so3-nonclassical", "--size", "1", "--eps", "+1,+1")
    assert code == 0 and json.loads(out)["g"] == [1, 1]


def test_classify_twisted(capsys):
    code, data = run_json(capsys, "classify", "--rep", "so4-nonclassical", "--r", "3/2", "--s", "1/2",
                          "--twist=-1,1,1")
    assert code == 0 and data["label"]["g"] == [-1, 1, 1]


def test_ladder_command(capsys):
    code, data = run_json(capsys, "ladder", "--rep", "so4-classical", "--r", "2", "--s", "1")
    assert code == 0
    assert data["highest_weight"] == [{"type": "classical", "m": "2"}, {"type": "classical", "m": "1"}]
    assert data["commutation"]["summary"]["failed"] == 0


def test_branch_command(capsys):
    code, data = run_json(capsys, "branch", "--rep", "so4-classical", "--r", "1", "--s", "0")
    assert code == 0 and data["oracle_agrees"]
    assert [c["params"] for c in data["components"]] == [["0"], ["1"]]


def test_rep_command(capsys):
    code, data = run_json(capsys, "rep", "--rep", "so3-classical", "--l", "1/2")
    assert code == 0 and data["dim"] == 2 and set(data["matrices"]) == {"I21", "I32"}


@pytest.mark.parametrize("argv", [
    ["rep"],
    ["rep", "--rep", "so3-classical"],
    ["rep", "--rep", "so3-classical", "--l", "1/3"],
    ["rep", "--rep", "so4-classical", "--r", "1", "--s", "1/2"],
    ["rep", "--rep", "so3-nonclassical", "--size", "2", "--eps=1"],
    ["rep", "--rep", "nonsense"],
    ["branch", "--rep", "so3-classical", "--l", "1"],
    ["normalize", "I21", "--p", "1"],
    ["normalize", "I21", "--n", "12"],
    ["frobnicate"],
])
def test_usage_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_failed_check_exits_1(capsys, monkeypatch):
    from uqso import branch

    monkeypatch.setattr(branch, "branch_by_commutant", lambda rep: {})
    code, data = run_json(capsys, "branch", "--rep", "so4-classical", "--r", "1", "--s", "0")
    assert code == 1 and data["oracle_agrees"] is False


def test_json_is_byte_deterministic():
    argv = [sys.executable, "-m", "uqso.cli", "ladder", "--rep", "so4-nonclassical",
            "--r", "3/2", "--s", "1/2", "--json"]
    outs = {subprocess.run(argv, capture_output=True, check=True).stdout for _ in range(2)}
    assert len(outs) == 1


def test_help_exits_0(capsys):
    assert run(capsys, "--help")[0] == 0
