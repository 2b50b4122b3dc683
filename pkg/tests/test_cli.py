import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from heightlab.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_cn(capsys):
    code, out, _ = call(capsys, "cn", "--n", "1000")
    data = json.loads(out)
    assert code == 0
    assert data["n"] == 1000 and data["argmin"] == [500, 500]
    assert Fraction(data["c_n"]) > 0 and abs(data["ratio"] - 1) < 0.15


def test_check_generator(capsys):
    code, out, _ = call(capsys, "check-generator", "--group", "an", "--a", "1,1,2,3,4")
    assert code == 0 and json.loads(out) == {"generator": True}
    code, out, _ = call(capsys, "check-generator", "--group", "an", "--a", "1,1,1,2,3")
    assert json.loads(out) == {"generator": False}


def test_verify_laguerre8(capsys):
    code, out, _ = call(capsys, "verify", "--poly", "laguerre:8", "--a", "0,1,2,3,4,5,6,7", "--group", "an", "--mode", "additive")
    rows = json.loads(out)
    assert code == 0
    assert {r["verdict"] for r in rows} <= {"PASS", "PASS-vacuous", "REFERENCE"}


def test_verify_fail_exit_2(capsys):
    code, out, err = call(capsys, "verify", "--poly", "laguerre:5", "--a", "0,1,2,3,4", "--group", "an", "--mode", "additive")
    assert code == 2
    assert "an_disc_square" in err
    assert any(r["verdict"] == "FAIL" for r in json.loads(out))


def test_verify_csv(capsys):
    code, out, _ = call(capsys, "verify", "--poly", "laguerre:4", "--a", "1,2,3,4", "--group", "an", "--mode", "multiplicative", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert list(rows[0]) == ["name", "lhs", "rhs", "relation", "margin", "verdict"]
    assert {r["name"]: r["verdict"] for r in rows}["thm12"] == "PASS"


def test_roots_and_mahler(capsys):
    code, out, _ = call(capsys, "roots", "--coeffs=-1,-1,1", "--bits", "128")
    data = json.loads(out)
    assert code == 0 and len(data["roots"]) == 2 and data["polynomial"] == ["-1", "-1", "1"]
    code, out, _ = call(capsys, "mahler", "--coeffs=-1,-1,1")
    assert code == 0 and json.loads(out)["log_mahler"]["value"].startswith("0.48121182505960344")


def test_heights(capsys):
    code, out, _ = call(capsys, "height-add", "--poly", "laguerre:4", "--a", "0,1,2,3")
    assert code == 0 and json.loads(out)["height"]["value"].startswith("1.99932996044810128")
    code, out, _ = call(capsys, "height-mult", "--coeffs=-1,-1,1", "--a", "1,-1", "--group", "sn")
    assert code == 0 and json.loads(out)["height"]["value"].startswith("0.48121182505960344")


def test_sn_and_laguerre(capsys):
    assert json.loads(call(capsys, "sn", "--n", "4", "--h", "2", "--k", "2")[1])["s_n"] == "1/3"
    assert json.loads(call(capsys, "sn", "--x", "1,1,-1,-1", "--y", "1,1,-1,-1")[1])["s_n"] == "1/3"
    assert json.loads(call(capsys, "laguerre", "--n", "4")[1]) == ["24", "24", "12", "4", "1"]
    code, out, _ = call(capsys, "families", "laguerre", "--n", "8", "--conditions")
    cond = json.loads(out)["conditions"]
    assert code == 0 and cond["disc_is_square"] and cond["squarefree"]


def test_domain_error_exit_1(capsys):
    code, _, err = call(capsys, "roots", "--coeffs", "1,2,1")
    assert code == 1 and "repeated" in err


def test_precision_exit_3(capsys):
    code, _, err = call(capsys, "roots", "--coeffs=-1,-1,1", "--bits", "9000")
    assert code == 3 and "precision" in err


@pytest.mark.parametrize("argv", [["cn", "--bogus"], ["frobnicate"], ["sn", "--n", "4"], ["verify", "--poly", "laguerre:4", "--a", "1,2,3,4", "--group", "d4", "--mode", "additive"], []])
def test_usage_exit_64(capsys, argv):
    code, out, err = call(capsys, *argv)
    assert code == 64 and out == "" and err


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "heightlab", "cn", "--n", "10"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["n"] == 10
