import json
import shutil
import subprocess
import sys

import pytest

from andreadakis.cli import main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_fox_word(capsys):
    code, out, _ = run(["fox", "--n", "2", "[x1,x2]"], capsys)
    assert code == 0
    assert "d/dx1 = 1 - x1*x2*x1^-1" in out


def test_fox_jacobian(capsys):
    code, out, _ = run(["fox", "--n", "2", "--endo", "x1 x2; x2"], capsys)
    assert code == 0 and "D[1,2] = d x1' / d x2 = x1" in out


def test_johnson_and_trace(capsys):
    code, out, _ = run(["johnson", "--n", "3", "--endo", "x2 x3 x2^-1 x3^-1 x1; x2; x3"], capsys)
    assert code == 0 and "X1* (x) ([X2,X3])" in out
    code, out, _ = run(["trace", "--n", "3", "--endo", "x2 x1 x2^-1; x2; x3"], capsys)
    assert code == 0 and "fox: 1*[X2]" in out and "algebraic: 1*[X2]" in out


@pytest.mark.parametrize("argv", [
    ["verify", "p-concentration", "--p", "4"],
    ["verify", "stable-surjectivity", "--n", "5", "--k", "3"],
    ["verify", "stable-surjectivity", "--n", "9"],
    ["verify", "nonsense"],
    ["trace", "--n", "3", "--endo", "x1; x2"],
    ["johnson", "--n", "2", "--endo", "x2; x1"],
    ["fox", "--n", "2", "x1 ^"],
])
def test_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as e:
        main(argv)
    assert e.value.code == 2


def test_verify_json_is_byte_stable(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["verify", "chainrule", "--n", "3", "--pairs", "20", "--seed", "7", "--json", str(a)]) == 0
    assert main(["verify", "chainrule", "--n", "3", "--pairs", "20", "--seed", "7", "--json", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    data = json.loads(a.read_text())
    assert data["seed"] == 7 and data["status"] == "pass"
    assert {c["claim"] for c in data["claims"]} == {"chain-rule", "fundamental-formula"}
    assert all(c["ref"] for c in data["claims"])
    out = capsys.readouterr()
    assert "chain-rule" in out.out and "chain-rule ..." in out.err


def test_verify_stable_surjectivity(capsys):
    code, out, _ = run(["verify", "stable-surjectivity", "--n", "4", "--k", "2"], capsys)
    assert code == 0 and '"free_rank": 10' in out


def test_verify_dark_product(capsys):
    code, out, _ = run(["verify", "dark", "--variant", "product", "--alpha-max", "5"], capsys)
    assert code == 0


def test_unstable_degree_is_informational(capsys):
    code, out, _ = run(["verify", "stable-surjectivity", "--n", "4", "--k", "3"], capsys)
    assert code == 0 and "INFO" in out


def test_failing_claim_exits_1(monkeypatch, capsys):
    from andreadakis import suites

    def broken(*a, **k):
        rep = suites.SuiteReport("chainrule", {}, 0)
        rep.claims.append(suites.Claim("x", "r", "fail", None, {"why": "forced"}))
        return rep
    monkeypatch.setattr(suites, "suite_chainrule", broken)
    code, out, _ = run(["verify", "chainrule"], capsys)
    assert code == 1 and "FAIL" in out


@pytest.mark.skipif(shutil.which("andreadakis") is None, reason="console script not installed")
def test_console_script():
    r = subprocess.run(["andreadakis", "verify", "satoh", "--n", "4", "--k", "2"], capture_output=True, text=True)
    assert r.returncode == 0
    r = subprocess.run([sys.executable, "-m", "andreadakis.cli", "verify", "congruence", "--q", "2"],
                       capture_output=True, text=True)
    assert r.returncode == 2
