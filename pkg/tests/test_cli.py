import json
import subprocess
import sys

import pytest

from mockdim import cli, dimformula


def run(capsys, *argv):
    status = cli.main(list(argv))
    return status, capsys.readouterr().out


def test_kloosterman(capsys):
    status, out = run(capsys, "kloosterman", "1", "1", "5")
    assert status == 0
    assert out.strip() == "K(1,1,5) = 0.38196601125"


def test_constants_text_and_json(capsys):
    status, out = run(capsys, "constants", "--level", "11")
    assert status == 0
    assert "C_E = -2.4" in out
    status, out = run(capsys, "constants", "--level", "11", "--json")
    rec = json.loads(out)
    assert rec["level"] == 11 and rec["points_f2"] == 5
    assert abs(rec["C_E"] + 2.4) < 1e-6 and rec["residual"] < 1e-6


def test_json_flag_before_subcommand(capsys):
    status, out = run(capsys, "--json", "kloosterman", "1", "1", "5")
    assert json.loads(out)["value"] == pytest.approx(0.381966011250, abs=1e-11)


def test_curve_record(capsys):
    status, out = run(capsys, "curve", "--level", "15", "--terms", "8", "--json")
    rec = json.loads(out)
    assert rec["coefficients"] == [1, -1, -1, -1, 1, 1, 0, 3]
    assert rec["atkin_lehner"] == {"3": 1, "5": -1, "15": -1}
    assert rec["j_invariant"] == "111284641/50625"


def test_zeta_value(capsys):
    status, out = run(capsys, "zeta-value", "--level", "17")
    assert status == 0
    assert "= 2  [N=17]" in out or "= 2.00000000000" in out


def test_op(capsys):
    status, out = run(capsys, "op", "--word", "W11,T3,B1", "--level", "11", "--json")
    rec = json.loads(out)
    assert rec["cusps"]["11"]["polar"] == {"-3": "1/3"}
    assert rec["cusps"]["1"]["constant"] == {"c[11]": "4/3"}


def test_dim_prime_paths_agree(capsys, tmp_path):
    path = tmp_path / "table.json"
    dimformula.DimensionTable.from_prime_dims(11, 2, {(1, 10): 1, (2, 4): 3}).dump(path)
    status, out = run(capsys, "dim", "--input", str(path), "--level", "11", "--json")
    rec = json.loads(out)
    assert status == 0 and rec["agree"] and rec["residual"] == {}
    assert dimformula.DimensionTable.from_record(rec["table"]).level == 11


def test_dim_composite(capsys, tmp_path):
    path = tmp_path / "table.json"
    dimformula.DimensionTable(15, 1, {}).dump(path)
    status, out = run(capsys, "dim", "--input", str(path))
    assert status == 0
    assert "(b) assembly" in out and "(a) printed" in out and "96" in out


def test_dim_level_mismatch(tmp_path):
    path = tmp_path / "table.json"
    dimformula.DimensionTable(15, 1, {}).dump(path)
    with pytest.raises(SystemExit):
        cli.main(["dim", "--input", str(path), "--level", "11"])


def test_poincare_tail_failure(capsys):
    status, out = run(capsys, "poincare", "--level", "11", "--index", "2", "--coeff", "3",
                      "--cmax", "5", "--tol", "1e-4")
    assert status == 1
    assert "tail estimate" in out


def test_verify_kloosterman(capsys):
    status, out = run(capsys, "verify", "kloosterman", "--seed", "3")
    assert status == 0
    assert "seed 3" in out and "[pass] Selberg identity" in out


def test_verify_poincare_small_cmax_fails(capsys):
    status, out = run(capsys, "verify", "poincare", "--cmax", "20")
    assert status == 1
    assert "FAIL" in out and "tail estimate" in out


def test_usage_errors(capsys):
    with pytest.raises(SystemExit):
        cli.main(["verify", "nonsense"])
    with pytest.raises(SystemExit):
        cli.main(["frobnicate"])
    with pytest.raises(SystemExit):
        cli.main(["curve", "--level", "13"])


def test_deterministic_output():
    cmd = [sys.executable, "-m", "mockdim", "verify", "dimensions", "--tables", "5"]
    a = subprocess.run(cmd, capture_output=True, text=True)
    b = subprocess.run(cmd, capture_output=True, text=True)
    assert a.returncode == 0
    assert a.stdout == b.stdout


def test_run_verify_suite_unknown_selector():
    with pytest.raises(KeyError):
        cli.run_verify_suite("everything")
    res = cli.dispatch(["kloosterman", "2", "3", "7"])
    assert res.status == 0 and res.record["c"] == 7
