import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from jacobiheat.cli import run_command


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_command(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def run_json(argv):
    code, out, err = run(argv)
    assert code == 0, err
    return json.loads(out)


def test_phi_closed_form():
    data = run_json(["phi", "--alpha", "0.5", "--beta", "-0.5", "--lambda", "1", "--x", "1"])
    assert data["value_re"] == pytest.approx(math.sin(1) / math.sinh(1), rel=1e-10)
    assert data["value_im"] == 0.0
    assert data["regime"] in ("series", "transformed-series", "asymptotic")
    assert data["config"]["alpha"] == 0.5


def test_classify_example():
    data = run_json(["classify", "--alpha", "0.5", "--beta", "-0.5", "--p", "4", "--theta", "1"])
    assert data["verdict"] == "chaotic"
    assert data["theta_p"] == pytest.approx(0.75) and data["margin"] == pytest.approx(0.25)


def test_invalid_order_exits_one():
    code, _, err = run(["phi", "--alpha", "-1", "--beta", "0", "--lambda", "1", "--x", "1"])
    assert code == 1 and "alpha > -1/2" in err


def test_usage_errors_exit_two(capsys):
    assert run(["frobnicate"])[0] == 2
    assert run(["phi", "--no-such-flag"])[0] == 2


def test_small_grid_is_a_config_error():
    code, _, err = run(["verify", "all", "--n", "8"])
    assert code == 1 and "n must be >= 16" in err


def test_pole_is_encoded():
    data = run_json(["cfun", "--alpha", "0", "--beta", "0", "--lambda", "0", "1"])
    assert data["values"][0]["c"] == {"pole": True}
    assert data["values"][1]["plancherel_density"] > 0


def test_periodic_count():
    data = run_json(["periodic", "--p", "4", "--theta", "1", "--period", "100"])
    assert data["count"] == 14


def test_csv_is_rfc4180(tmp_path):
    path = tmp_path / "h.csv"
    code, _, err = run(["heat-kernel", "--t", "1", "--n", "64", "--format", "csv",
                        "--output", str(path)])
    assert code == 0, err
    raw = path.read_bytes()
    assert raw.startswith(b"x,re,im\r\n")
    rows = list(csv.DictReader(io.StringIO(raw.decode())))
    assert len(rows) == 64
    x = np.array([float(r["x"]) for r in rows])
    assert np.all(np.diff(x) > 0)


def test_json_has_no_nan(tmp_path):
    data = run(["lorentz-norm", "--sample", "gaussian", "--p", "2", "--q", "inf", "--x-max", "6"])
    assert data[0] == 0
    json.loads(data[1], parse_constant=lambda c: pytest.fail(f"non-standard constant {c}"))


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"alpha": 2.0, "beta": 1.0, "grid": {"n": 32, "x_max": 5.0}}))
    data = run_json(["classify", "--config", str(cfg), "--p", "4", "--theta", "1"])
    assert data["config"]["alpha"] == 2.0 and data["config"]["grid"]["n"] == 32
    assert data["verdict"] == "unclassified"
    data = run_json(["classify", "--config", str(cfg), "--alpha", "0.5", "--beta", "-0.5"])
    assert data["config"]["alpha"] == 0.5 and data["config"]["grid"]["x_max"] == 5.0


def test_embedded_config_reproduces(tmp_path):
    argv = ["evolve", "--sample", "gaussian", "--t", "0.5", "--n", "128", "--x-max", "8"]
    first = run_json(argv)
    cfg = tmp_path / "again.json"
    cfg.write_text(json.dumps(first["config"]))
    second = run_json(["evolve", "--config", str(cfg), "--sample", "gaussian", "--t", "0.5"])
    assert first == second


def test_deterministic_bytes(tmp_path):
    outs = []
    for name in ("a.csv", "b.csv"):
        path = tmp_path / name
        code, _, err = run(["transform", "--sample", "gaussian", "--n", "256", "--x-max", "8",
                            "--spacing", "hybrid", "--format", "csv", "--output", str(path)])
        assert code == 0, err
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_transform_invert_round_trip(tmp_path):
    spectrum = tmp_path / "g.csv"
    common = ["--n", "512", "--x-max", "8", "--spacing", "hybrid", "--lambda-max", "30",
              "--format", "csv"]
    assert run(["transform", "--sample", "gaussian", "--output", str(spectrum)] + common)[0] == 0
    code, out, err = run(["invert", "--input", str(spectrum)] + common)
    assert code == 0, err
    rows = list(csv.DictReader(io.StringIO(out)))
    x = np.array([float(r["x"]) for r in rows])
    v = np.array([float(r["re"]) for r in rows])
    m = x < 4
    assert np.max(np.abs(v[m] - np.exp(-x[m] ** 2))) < 1e-8


def test_invert_heat_matches_closed_form():
    data = run_json(["invert", "--heat-t", "1", "--x-min", "0.1", "--x-max", "3", "--n", "16",
                     "--spacing", "uniform", "--tol", "1e-12"])
    x = np.array(data["x"])
    exact = x * np.exp(-1 - x * x / 4) / (8 * math.sqrt(math.pi) * np.sinh(x))
    assert np.allclose(data["re"], exact, rtol=1e-8)


def test_transform_at_points():
    data = run_json(["transform", "--sample", "heat1", "--x-max", "25", "--n", "1024",
                     "--spacing", "hybrid", "--lambda", "1"])
    val = data["values"][0]["value"]
    assert val["re"] == pytest.approx(math.exp(-2), rel=1e-8)


def test_verify_dynamics_report():
    code, out, err = run(["verify", "dynamics"])
    assert code == 0, err
    report = json.loads(out)
    names = {c["check"]: c for c in report["checks"]}
    assert names["periodic_count(T=100,p=4,theta=1)"]["value"] == 14
    assert all(set(c) == {"check", "value", "tolerance", "pass"} for c in report["checks"])
    assert report["pass"] is True


def test_verify_heat_mass():
    code, out, err = run(["verify", "heat", "--t", "1"])
    assert code == 0, err
    checks = {c["check"]: c for c in json.loads(out)["checks"]}
    assert checks["mass(t=1.0)"]["pass"] is True


def test_thread_cap_env(monkeypatch):
    monkeypatch.setenv("JACOBI_HEAT_THREADS", "1")
    assert run_json(["classify"])["verdict"] == "chaotic"


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "jacobiheat.cli", "classify", "--p", "1.5"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["verdict"] == "no_periodic_points_not_hypercyclic"
