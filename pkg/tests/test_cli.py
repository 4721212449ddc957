import csv
import json
import math
import shutil
import subprocess
import sys

import pytest

from lcertify import cli, turing
from lcertify.ball import ball_from_json
from lcertify.s_integral import BoundReport

from oracles import c_theta_oracle


def run_json(args, capsys):
    code = cli.run(args)
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.strip() else None), out.err


def test_constants(capsys):
    code, obj, _ = run_json(["constants", "--eps", "0.5"], capsys)
    assert code == 0
    assert abs(ball_from_json(obj["c_theta_eps"]).mid - c_theta_oracle(0.0, 0.5)) <= 1e-6


def test_bound_round_trip(capsys):
    code, obj, _ = run_json(["bound", "--input", "zeta", "--t1", "50", "--t2", "60",
                             "--eps", "0.45", "--X", "6"], capsys)
    assert code == 0
    rep = BoundReport.from_json(obj)
    assert rep.status == "OK"
    assert rep.to_json() == obj


def test_constants_closed_form(capsys):
    code, obj, _ = run_json(["constants", "--theta", "0", "--eps", "0.5"], capsys)
    assert code == 0
    assert ball_from_json(obj["A_eps"]).contains(2 * math.log(2))


def test_bound_degenerate_window(capsys):
    code, obj, _ = run_json(["bound", "--input", "zeta", "--t1", "50", "--t2", "50",
                             "--eps", "0.4", "--X", "10"], capsys)
    assert code == 0 and ball_from_json(obj["rhs"]).lower() >= 0


def test_bound_precondition_exit(capsys):
    code, _, err = run_json(["bound", "--input", "zeta", "--t1", "5", "--t2", "6",
                             "--eps", "0.45", "--X", "50"], capsys)
    assert code == 1
    assert err.startswith("precondition failed:")


def test_convexity_and_examples(capsys):
    code, obj, _ = run_json(["convexity", "--input", "dirichlet_mod3", "--sigma", "0.5",
                             "--t", "20", "--eps", "0.3"], capsys)
    assert code == 0 and ball_from_json(obj["bound"]).mid > 0
    code, obj, _ = run_json(["examples"], capsys)
    assert code == 0 and abs(ball_from_json(obj["maass_constant"]).mid - 10.4) < 0.05


def test_eval_g_only(capsys, tmp_path):
    out = tmp_path / "g.csv"
    assert cli.run(["eval", "--input", "zeta", "--g-only", "--u=-1,0,1.5", "--eta", "0.5",
                    "--out", str(out)]) == 0
    rows = list(csv.DictReader(open(out)))
    assert len(rows) == 3
    for r in rows:
        assert float.fromhex(r["re_hex"]) == float(r["re"])


def test_eval_grid_csv(tmp_path):
    out, spec = tmp_path / "grid.csv", tmp_path / "spec.json"
    assert cli.run(["--threads", "1", "eval", "--input", "zeta", "--T", "20", "--tol", "1e-6",
                    "--out", str(out), "--spec-out", str(spec)]) == 0
    rows = list(csv.DictReader(open(out)))
    assert rows and all(float(r["F_radius"]) <= 1e-6 for r in rows)
    assert all(float.fromhex(r["lambda_center_hex"]) == float(r["lambda_center"]) for r in rows)
    assert json.load(open(spec))["T"] == 20


def test_verify_complete(tmp_path):
    out = tmp_path / "cert.json"
    assert cli.run(["--threads", "1", "verify", "--input", "zeta", "--t-max", "30",
                    "--out", str(out)]) == 0
    cert = turing.Certificate.from_json(json.load(open(out)))
    assert cert.verdict is turing.Verdict.COMPLETE
    assert cert.claimed_zero_count == 3


def test_verify_inconclusive_exit(tmp_path):
    out = tmp_path / "cert.json"
    assert cli.run(["--threads", "1", "verify", "--input", "zeta", "--t-max", "30", "--h", "1",
                    "--out", str(out)]) == 2
    assert json.load(open(out))["verdict"] == "inconclusive"


def test_bad_arguments(capsys):
    assert cli.run(["verify", "--input", "zeta", "--t-min", "10", "--t-max", "5"]) == 1
    assert "precondition failed" in capsys.readouterr().err
    assert cli.run(["bound", "--input", "no_such_descriptor", "--t1", "1", "--t2", "2",
                    "--eps", "0.4", "--X", "6"]) == 1


def test_check_properties(capsys):
    code, obj, _ = run_json(["check-properties", "--input", "zeta", "--n", "5"], capsys)
    assert code == 0 and obj["passed"]
    assert len(obj["gammaQ"]) == 5 and len(obj["easy_integral"]) == 5


@pytest.mark.skipif(shutil.which("lcertify") is None, reason="console script not installed")
def test_console_script():
    p = subprocess.run(["lcertify", "constants", "--eps", "0.4"], capture_output=True, text=True)
    assert p.returncode == 0
    assert "c_theta_eps" in json.loads(p.stdout)


def test_module_entry():
    p = subprocess.run([sys.executable, "-m", "lcertify.cli", "--help"], capture_output=True,
                       text=True)
    assert p.returncode == 0 and "verify" in p.stdout
