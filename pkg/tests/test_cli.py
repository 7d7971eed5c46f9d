import json
import os
import subprocess
import sys

import pytest

BASE = ["python3", "-m", "nilcube.cli"]


def run_cli(args, cache_dir, **kw):
    env = dict(os.environ)
    env["NILCUBE_CACHE_DIR"] = str(cache_dir)
    return subprocess.run(BASE + args, capture_output=True, text=True,
                          env=env, **kw)


def test_zero_test_nonzero_mod3(tmp_path):
    r = run_cli(["zero-test", "--char", "3", "--expr", "x1^2 x2^2 x1 x2"],
                tmp_path)
    assert r.returncode == 0, r.stderr
    out = json.loads(r.stdout)
    assert out["is_zero"] is False
    assert out["schema_version"] == 1


def test_zero_test_zero_mod5_and_verify_roundtrip(tmp_path):
    r = run_cli(["zero-test", "--char", "5", "--expr", "x1^2 x2^2 x1 x2"],
                tmp_path)
    assert r.returncode == 0, r.stderr
    out = json.loads(r.stdout)
    assert out["is_zero"] is True
    cert_path = out["certificate_path"]
    rv = run_cli(["verify", cert_path], tmp_path)
    assert rv.returncode == 0, rv.stderr
    assert json.loads(rv.stdout)["verified"] is True


def test_zero_test_trivial_cube(tmp_path):
    r = run_cli(["zero-test", "--char", "0", "--expr", "x1^3"], tmp_path)
    assert r.returncode == 0
    assert json.loads(r.stdout)["is_zero"] is True


def test_parse_error_exit_code(tmp_path):
    r = run_cli(["zero-test", "--char", "0", "--expr", "y3 + x1"], tmp_path)
    assert r.returncode == 1
    assert "parse error" in r.stderr
    assert "token" in r.stderr  # position diagnostics


def test_tampered_certificate_exit_3(tmp_path):
    r = run_cli(["zero-test", "--char", "5", "--expr", "x1^2 x2^2 x1 x2"],
                tmp_path)
    cert_path = json.loads(r.stdout)["certificate_path"]
    with open(cert_path) as fh:
        data = json.load(fh)
    data["rows"][0]["coeff"] = str((int(data["rows"][0]["coeff"]) + 1) % 5)
    bad = tmp_path / "tampered.json"
    bad.write_text(json.dumps(data))
    rv = run_cli(["verify", str(bad)], tmp_path)
    assert rv.returncode == 3
    assert json.loads(rv.stdout)["verified"] is False


def test_malformed_certificate_exit_1(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    rv = run_cli(["verify", str(bad)], tmp_path)
    assert rv.returncode == 1


def test_cache_transparency(tmp_path):
    args = ["zero-test", "--char", "3", "--expr", "x1 x2 x1"]
    cold = run_cli(args, tmp_path)
    warm = run_cli(args, tmp_path)
    assert cold.returncode == warm.returncode == 0
    assert cold.stdout == warm.stdout


def test_dim_command(tmp_path):
    r = run_cli(["dim", "--char", "0", "--mdeg", "2,1"], tmp_path)
    assert r.returncode == 0
    assert json.loads(r.stdout)["dimension"] == 2


def test_nildeg_command(tmp_path):
    r = run_cli(["nildeg", "--char", "3", "--letters", "2"], tmp_path)
    assert r.returncode == 0
    out = json.loads(r.stdout)
    assert out["nilpotency_degree"] == 7


def test_functional_check_command(tmp_path):
    r = run_cli(["functional-check", "--char", "2", "--name",
                 "square-subword-count", "--mdeg", "3,1,1"], tmp_path)
    assert r.returncode == 0
    assert json.loads(r.stdout)["annihilates_system"] is True
    r2 = run_cli(["functional-check", "--char", "5", "--name",
                  "square-subword-count", "--mdeg", "3,1,1"], tmp_path)
    assert r2.returncode == 1


def test_amitsur_command(tmp_path):
    r = run_cli(["amitsur", "--k", "2", "--summands", "x1; x2",
                 "--check-n", "3", "--trials", "25"], tmp_path)
    assert r.returncode == 0
    out = json.loads(r.stdout)
    assert out["numeric_check"]["agrees"] is True
    assert len(out["terms"]) == 4


def test_trace_decompose_command(tmp_path):
    r = run_cli(["trace-decompose", "--char", "3", "--expr",
                 "x1^2 x2^2 x1 x2"], tmp_path)
    assert r.returncode == 0
    assert json.loads(r.stdout)["decomposable"] is False


def test_report_theorem1_table(tmp_path):
    r = run_cli(["report", "--theorem", "1", "--char", "2",
                 "--letters-range", "2,3"], tmp_path)
    assert r.returncode == 0
    rows = json.loads(r.stdout)["rows"]
    assert [row["computed"] for row in rows] == [6, 6]
    assert [row["expected"] for row in rows] == [6, 6]


def test_report_generator_bounds_table(tmp_path):
    r = run_cli(["report", "--theorem", "2", "--char", "5",
                 "--letters-range", "2,2"], tmp_path)
    assert r.returncode == 0
    row = json.loads(r.stdout)["rows"][0]
    assert row["expected"] == [6, 6]
    assert row["observed_indecomposable_degree"] == 6


def test_json_flag_writes_file(tmp_path):
    out = tmp_path / "out.json"
    r = run_cli(["dim", "--char", "3", "--mdeg", "1,1", "--json", str(out)],
                tmp_path)
    assert r.returncode == 0
    assert json.loads(out.read_text())["dimension"] == 2


def test_nildeg_witness_certificates(tmp_path):
    r = run_cli(["nildeg", "--char", "0", "--letters", "2"], tmp_path)
    assert r.returncode == 0
    out = json.loads(r.stdout)
    assert out["nilpotency_degree"] == 6
    wit = out["witnesses"]
    assert wit and any("certificate_path" in w for w in wit)
    path = next(w["certificate_path"] for w in wit if "certificate_path" in w)
    rv = run_cli(["verify", path], tmp_path)
    assert rv.returncode == 0


def test_zero_test_undecided_exit_2(tmp_path):
    # doubled component for four letters: beyond the solve budget, the
    # word is canonical (rewriting keeps it) and no functional applies
    r = run_cli(["zero-test", "--char", "3", "--expr",
                 "x1^2 x2^2 x1 x2 x3^2 x4^2 x3 x4"], tmp_path)
    assert r.returncode == 2
    out = json.loads(r.stdout)
    assert out["status"] == "undecided"
    assert out["is_zero"] is None


def test_report_theorem1_range_2_to_4(tmp_path):
    r = run_cli(["report", "--theorem", "1", "--char", "2",
                 "--letters-range", "2,4"], tmp_path)
    assert r.returncode == 0
    rows = json.loads(r.stdout)["rows"]
    assert [row["computed"] for row in rows] == [6, 6, 7]
