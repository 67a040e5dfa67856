import json

import pytest

from kkw_boundary.cli import run


def _json(capsys, argv):
    code = run(argv)
    return code, json.loads(capsys.readouterr().out)


def test_phi_json(capsys):
    code, data = _json(capsys, ["phi", "--n", "6", "--p", "1,3", "--format", "json"])
    assert code == 0
    assert data["total"]["coeff"] == {"re": "15/16", "im": "-35/16"}
    assert data["total"]["kappa"] == 1 and data["total"]["pi"] == 1 and data["total"]["omega"] == 4


def test_phi_markdown_table(capsys):
    assert run(["phi"]) == 0
    out = capsys.readouterr().out
    assert "| case | r | l | k | j | alpha |" in out
    assert "(55/16)*pi*Omega4*kappa" in out


def test_phi_mismatch_exits_2_and_still_reports(capsys):
    code = run(["phi", "--n", "5", "--p", "1,3"])
    out = capsys.readouterr().out
    assert code == 2
    assert "Total: (3/4)*pi*Omega3" in out and "MISMATCH" in out


def test_out_file(tmp_path, capsys):
    target = tmp_path / "r.json"
    assert run(["phi", "--format", "json", "--out", str(target)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(target.read_text())["n"] == 6


def test_output_is_deterministic(capsys):
    run(["phi", "--format", "json"])
    first = capsys.readouterr().out
    run(["phi", "--format", "json"])
    assert capsys.readouterr().out == first


def test_case(capsys):
    code, data = _json(capsys, ["case", "--label", "c", "--format", "json"])
    assert code == 0 and data["integral"]["text"] == "(55/16)*pi*Omega4*kappa"
    assert run(["case", "--label", "zz"]) == 1


def test_report(capsys):
    code, data = _json(capsys, ["report", "--format", "json"])
    assert code == 0 and data["passed"]
    assert run(["report", "--n", "5"]) == 2


@pytest.mark.parametrize(
    "expr,expected",
    [("tr(P*A)", "-4*kappa*u"), ("piplus(1/((xi-i)*(xi+i)))", "-i/(2*(xi-i))"), ("int((2*i-6*xi)/((xi-i)^3*(xi+i)^3))", "(3/4)*pi*i")],
)
def test_eval(capsys, expr, expected):
    assert run(["eval", expr, "--n", "6"]) == 0
    assert capsys.readouterr().out.strip() == expected


def test_eval_errors(capsys):
    assert run(["eval", "1/xi"]) == 1
    assert "position 2" in capsys.readouterr().err
    assert run(["eval", "int(xi)"]) == 1


@pytest.mark.parametrize(
    "argv", [[], ["bogus"], ["phi", "--p", "x"], ["phi", "--unknown"], ["phi", "--n", "7"], ["phi", "--perturb", "g"]]
)
def test_usage_errors_print_grammar(capsys, argv):
    assert run(argv) == 1
    err = capsys.readouterr().err
    assert "usage:" in err and "expr   :=" in err


def test_selftest(capsys):
    assert run(["selftest"]) == 0
    assert "FAIL" not in capsys.readouterr().out


def test_verify_single_seed(capsys):
    code, data = _json(capsys, ["verify", "--seed", "7", "--tol", "1e-8", "--format", "json"])
    assert data["oracle_passed"]
    assert code == (0 if data["passed"] else 2)
