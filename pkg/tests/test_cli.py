import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest
from numpy.testing import assert_allclose

from fracdf import _rng
from fracdf.cli import (
    EXIT_COVERAGE,
    EXIT_DEGENERATE,
    EXIT_NON_NUMERIC,
    EXIT_OK,
    EXIT_REJECT,
    EXIT_UNREADABLE,
    EXIT_USAGE,
    main,
)
from fracdf.fdftest import read_tables
from fracdf.io import format_series, read_series


def run(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def record(out):
    return {row["field"]: row["value"] for row in csv.DictReader(io.StringIO(out))}


def test_simulate_is_deterministic(capsys):
    _, first, _ = run(capsys, "simulate", "--d", 0.4, "--n", 200, "--seed", 3)
    _, second, _ = run(capsys, "simulate", "--d", 0.4, "--n", 200, "--seed", 3)
    assert first == second
    assert len(first.splitlines()) == 200
    _, other, _ = run(capsys, "simulate", "--d", 0.4, "--n", 200, "--seed", 4)
    assert other != first


def test_simulate_white_noise_mean(capsys):
    _, out, _ = run(capsys, "simulate", "--d", 0, "--n", 2000, "--seed", 5, "--sigma", 2)
    x = read_series(io.StringIO(out))
    assert abs(x.mean()) < 4 * 2 / np.sqrt(2000)
    assert_allclose(x, _rng.gaussian_innovations(2000, 5, sigma=2.0), atol=1e-12)


def test_simulate_then_fracdiff_recovers_innovations(capsys, monkeypatch, tmp_path):
    path = tmp_path / "y.txt"
    assert run(capsys, "simulate", "--d", 0.8, "--n", 500, "--seed", 6, "-o", path)[0] == EXIT_OK
    code, out, _ = run(capsys, "fracdiff", "--d", 0.8, stdin=path.read_text(),
                       monkeypatch=monkeypatch)
    assert code == EXIT_OK
    assert_allclose(read_series(io.StringIO(out)), _rng.gaussian_innovations(500, 6), atol=1e-9)


def test_test_command_output(capsys, tmp_path):
    path = tmp_path / "rw.txt"
    path.write_text(format_series(np.cumsum(np.random.default_rng(0).standard_normal(250)), header="value"))
    code, out, err = run(capsys, "test", path)
    assert err == ""
    rec = record(out)
    assert code == (EXIT_REJECT if rec["decision"] == "reject" else EXIT_OK)
    assert rec["statistic"] == "Z2" and rec["d0"] == "1.0" and rec["alpha"] == "0.05"
    assert float(rec["phi_hat"]) - float(rec["rho_hat"]) == 1.0
    assert int(rec["n"]) == 250
    for key in ("value", "critical_value", "s2"):
        float(rec[key])
    code, out, _ = run(capsys, "test", path, "--format", "json", "--stat", "Z1", "--lags", 2)
    payload = json.loads(out)
    assert payload["statistic"] == "Z1" and payload["n"] == 248 and payload["lags"] == 2


def test_unit_root_size_through_cli(capsys, tmp_path):
    rejections = 0
    path = tmp_path / "y.txt"
    for seed in range(200):
        run(capsys, "simulate", "--d", 1, "--n", 250, "--seed", seed, "-o", path)
        rejections += run(capsys, "test", path, "--d0", 1)[0] == EXIT_REJECT
    # binomial(200, 0.05): mean 10, sd about 3
    assert rejections <= 22


def test_white_noise_rejects_half_order(capsys, tmp_path):
    path = tmp_path / "y.txt"
    codes = []
    for seed in range(50):
        run(capsys, "simulate", "--d", 0, "--n", 250, "--seed", seed, "-o", path)
        codes.append(run(capsys, "test", path, "--d0", 0.5)[0])
    assert codes.count(EXIT_REJECT) >= 45


@pytest.mark.parametrize("content,code", [
    ("", EXIT_UNREADABLE),
    ("\n\n", EXIT_UNREADABLE),
    ("header\n", EXIT_UNREADABLE),
    ("1\n2\nabc\n4\n", EXIT_NON_NUMERIC),
    ("1\n2\nnan\n4\n", EXIT_NON_NUMERIC),
    ("1\n\n3\n4\n", EXIT_NON_NUMERIC),
    ("0\n0\n0\n0\n0\n", EXIT_DEGENERATE),
    ("1\n2\n", EXIT_DEGENERATE),
])
def test_input_errors(capsys, tmp_path, content, code):
    path = tmp_path / "in.txt"
    path.write_text(content)
    got, out, err = run(capsys, "test", path)
    assert got == code
    assert out == "" and err.startswith("fracdf:")


def test_missing_file(capsys, tmp_path):
    assert run(capsys, "test", tmp_path / "absent.txt")[0] == EXIT_UNREADABLE


def test_short_series_outside_table(capsys, tmp_path):
    path = tmp_path / "in.txt"
    path.write_text("\n".join(map(str, np.cumsum(np.arange(1.0, 12.0) % 3 - 1.2))))
    assert run(capsys, "test", path)[0] == EXIT_COVERAGE


@pytest.mark.parametrize("argv", [
    [],
    ["nope"],
    ["test", "--alpha", "0.7"],
    ["test", "--stat", "z3"],
    ["test", "--lags", "-1"],
    ["simulate", "--d", "0.5", "--n", "0"],
    ["simulate", "--d", "0.5"],
    ["simulate", "--d", "x", "--n", "10"],
    ["calibrate", "--reps", "50"],
    ["calibrate", "--alpha-grid", "0.05,abc"],
    ["sweep", "--d0", "0.5", "--step", "0"],
    ["density", "--grid", "1"],
    ["mc", "--config", "/nonexistent/none.yaml"],
])
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code in (EXIT_USAGE, EXIT_UNREADABLE)
    assert out == "" and err
    if argv[:1] != ["mc"]:
        assert code == EXIT_USAGE


def test_calibrate_command(capsys, tmp_path):
    path = tmp_path / "cv.csv"
    argv = ["calibrate", "--stat", "z2", "--n-grid", "30,60", "--alpha-grid", "0.05,0.1",
            "--reps", 2000, "--seed", 4, "-o", path]
    assert run(capsys, *argv)[0] == EXIT_OK
    table = read_tables(path)["Z2"]
    assert table.n_grid == (30, 60) and table.calibration.seed == 4
    # the written table drives the test command
    series = tmp_path / "y.txt"
    run(capsys, "simulate", "--d", 1, "--n", 45, "--seed", 1, "-o", series)
    code, out, _ = run(capsys, "test", series, "--table", path, "--alpha", 0.1)
    assert code in (EXIT_OK, EXIT_REJECT)
    assert float(record(out)["critical_value"]) > table.entries[(30, 0.1)] - 1
    assert run(capsys, "test", series, "--table", path, "--alpha", 0.01)[0] == EXIT_COVERAGE


def test_mc_command(capsys, tmp_path):
    cfg = tmp_path / "exp.yaml"
    cfg.write_text("seed: 2\nreplications: 1\nexperiments:\n"
                   "  - {d_true: 1.0, n: 50, d0_grid: [0.8, 1.0]}\n")
    code, out, err = run(capsys, "mc", "--config", cfg)
    assert code == EXIT_OK and "done" in err
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 6
    assert {float(r["frequency"]) for r in rows} <= {0.0, 1.0}
    code, out, _ = run(capsys, "mc", "--config", cfg, "--format", "json", "--samples")
    assert len(json.loads(out)["reports"][0]["samples"]) == 2
    cfg.write_text("experiments:\n  - {d_true: 1.0, n: 50}\n")
    code, _, err = run(capsys, "mc", "--config", cfg)
    assert code == EXIT_USAGE and "line 2" in err


def test_density_command(capsys, monkeypatch):
    sample = format_series(np.random.default_rng(2).standard_normal(400))
    code, out, _ = run(capsys, "density", "--grid", 100, stdin=sample, monkeypatch=monkeypatch)
    assert code == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 100
    xs = np.array([float(r["x"]) for r in rows])
    ys = np.array([float(r["density"]) for r in rows])
    assert abs(np.trapezoid(ys, xs) - 1) < 0.02


def test_sweep_command(capsys):
    code, out, _ = run(capsys, "sweep", "--d0", 0.5, "--d-min", 0, "--d-max", 1.5,
                       "--step", 0.5, "--n", 500, "--seed", 1)
    assert code == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [float(r["d"]) for r in rows] == [0.0, 0.5, 1.0, 1.5]
    phi = [float(r["phi_hat"]) for r in rows]
    assert phi[0] < 0.9 and abs(phi[3] - 1) < 0.02


def test_module_entry_point(tmp_path):
    series = tmp_path / "y.txt"
    series.write_text(format_series(np.random.default_rng(3).standard_normal(250)))
    proc = subprocess.run([sys.executable, "-m", "fracdf", "test", str(series), "--d0", "0.5"],
                          capture_output=True, text=True)
    assert proc.returncode == EXIT_REJECT
    assert "decision,reject" in proc.stdout and proc.stderr == ""
