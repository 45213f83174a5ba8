import json
import shutil
import subprocess

import pytest

from expdef.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out) if out.strip() else None


def test_define_sqrt2(capsys):
    code, doc = run_json(capsys, "define", "z(8) + z(8)^-1")
    assert code == 0
    assert doc["verdict"] == "RealAbelian"
    assert doc["refused"] is False
    assert doc["free"] == ["x"]
    assert doc["witness_plan"]["assignments"]["x"]


def test_define_refuses_non_real(capsys):
    code, doc = run_json(capsys, "define", "z(4)")
    assert code == 1
    assert doc["refused"] and doc["verdict"] == "AbelianNotReal"


def test_define_from_minpoly(capsys):
    code, doc = run_json(capsys, "define", "--minpoly", "x^2 - 2", "--root", "1")
    assert code == 0
    assert doc["recognition"]["verdict"] == "RealAbelian"
    code, doc = run_json(capsys, "define", "--minpoly", "x^3 - 2", "--root", "0")
    assert code == 2
    assert doc["verdict"] == "NotAbelianUpToBound"


def test_define_then_check(tmp_path, capsys):
    code, out, _ = run(capsys, "define", "1 + z(12) + z(12)^-1")
    assert code == 0
    envelope = tmp_path / "def.json"
    envelope.write_text(out)
    code, doc = run_json(capsys, "check", "--formula", str(envelope), "--model", "sk")
    assert code == 0 and doc["verdict"] == "pass"
    code, doc = run_json(capsys, "check", "--formula", str(envelope), "--model", "numeric", "--precision", "256")
    assert code == 0 and doc["verdict"] == "pass"
    assert float(doc["max_residual"]) < 2.0**-120


def test_check_with_sexpr_file_and_witnesses(tmp_path, capsys):
    formula = tmp_path / "f.sexpr"
    formula.write_text("(forall x (implies (= (E x) 1) (= (E (* y x)) 1)))")
    witnesses = tmp_path / "w.json"
    witnesses.write_text(json.dumps({"y": "3"}))
    code, doc = run_json(capsys, "check", "--formula", str(formula), "--witnesses", str(witnesses))
    assert code == 0 and doc["complexity"] == "∀"
    witnesses.write_text(json.dumps({"y": "1/2"}))
    code, doc = run_json(capsys, "check", "--formula", str(formula), "--witnesses", str(witnesses))
    assert code == 1 and doc["verdict"] == "fail"
    # a free variable without a value is a usage error
    code, _, err = run(capsys, "check", "--formula", str(formula))
    assert code == 3 and "y" in err


def test_check_builder_inapplicable_in_sk(capsys):
    code, doc = run_json(capsys, "check", "--builder", "int_laczkovich", "--model", "sk")
    assert code == 2 and doc["verdict"] == "inapplicable"
    code, doc = run_json(capsys, "check", "--builder", "int_laczkovich", "--model", "numeric")
    assert code == 0


def test_render_formats(capsys):
    code, out, _ = run(capsys, "render", "--builder", "int_forall", "--format", "text")
    assert code == 0 and "∀x (E(x) = 1 → E(y·x) = 1)" in out
    code, out, _ = run(capsys, "render", "--builder", "int_forall", "--format", "sexpr")
    assert "(forall x (implies (= (E x) 1) (= (E (* y x)) 1)))" in out
    code, doc = run_json(capsys, "render", "--builder", "kernel_generators")
    assert doc["complexity"] == "∀∃∀"


def test_decompose_and_recognize(capsys):
    code, doc = run_json(capsys, "decompose", "z(5) + z(5)^4")
    assert code == 0 and doc["real_abelian"] and doc["totally_real"]
    code, doc = run_json(capsys, "decompose", "z(3)")
    assert code == 1 and not doc["real_abelian"]
    code, doc = run_json(capsys, "recognize", "--minpoly", "x^2 + x + 1", "--root", "0")
    assert code == 0 and doc["verdict"] == "AbelianNotReal"
    code, doc = run_json(capsys, "recognize", "--minpoly", "x^3 - 2", "--root", "0")
    assert code == 2


def test_sk_verbs(capsys):
    code, doc = run_json(capsys, "sk", "sigma1", "tau + z(4)")
    assert code == 0 and doc["sigma1"]
    code, doc = run_json(capsys, "sk", "delta", "tau/2", "tau/3")
    assert code == 0 and doc["delta"] == 0
    code, doc = run_json(capsys, "sk", "free", "tau/2")
    assert code == 1 and doc["free"] is False
    code, doc = run_json(capsys, "sk", "cktau", "z(4)")
    assert code == 0 and doc["verdict"] == "InvolutionExtends"
    code, doc = run_json(capsys, "sk", "cktau", "1")
    assert doc["verdict"] == "OnlyTrivialAutomorphism"


@pytest.mark.parametrize("argv", [
    ["define", "z(8) +"],
    ["define", "1/0"],
    ["define"],
    ["define", "z(4)", "--minpoly", "x^2+1", "--root", "0"],
    ["recognize", "--minpoly", "x^2 - 2", "--root", "5"],
    ["recognize", "--minpoly", "(x-1)^2", "--root", "0"],
    ["check", "--builder", "nope"],
    ["check"],
    ["render", "--formula", "/nonexistent/file"],
    ["define", "z(8)", "--precision", "16"],
    ["frobnicate"],
    ["sk", "sigma1"],
])
def test_usage_errors_exit_3(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 3
    assert err
    assert out == ""


def test_bad_sexpr_exits_3(tmp_path, capsys):
    bad = tmp_path / "bad.sexpr"
    bad.write_text("(and (= x 1)")
    code, _, err = run(capsys, "render", "--formula", str(bad))
    assert code == 3 and "parse error" in err


def test_output_is_deterministic(capsys):
    argv = ["define", "z(7) + z(7)^-1", "--format", "json"]
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second


def test_text_and_latex_formats(capsys):
    code, out, _ = run(capsys, "define", "7/3", "--format", "text")
    assert code == 0 and "(1 + 1 + 1)·x" in out
    code, out, _ = run(capsys, "define", "7/3", "--format", "latex")
    assert code == 0 and r"\cdot" in out


def test_precision_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("EXPDEF_PRECISION", "128")
    code, doc = run_json(capsys, "check", "--builder", "sqrt2", "--model", "numeric")
    assert code == 0 and doc["precision_bits"] == 128
    monkeypatch.setenv("EXPDEF_PRECISION", "not-a-number")
    code, _, _ = run(capsys, "check", "--builder", "sqrt2", "--model", "numeric")
    assert code == 3


@pytest.mark.skipif(shutil.which("expdef") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["expdef", "render", "--builder", "rat_exists", "--format", "text"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.startswith("∃")
