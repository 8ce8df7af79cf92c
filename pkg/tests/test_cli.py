import json
import subprocess
import sys

import pytest

from irslink.curves import read_curve_csv

from test_scenario import make


def run_cli(*args, cwd=None):
    return subprocess.run(
        [sys.executable, "-m", "irslink.cli", *args],
        capture_output=True,
        text=True,
        cwd=cwd,
    )


def test_curve_subcommand(tmp_path):
    out = tmp_path / "fig2a.csv"
    result = run_cli("curve", "--scenario", "fig2a", "--trials", "0", "--out", str(out))
    assert result.returncode == 0, result.stderr
    curve = read_curve_csv(out)
    assert curve.scenario_name == "fig2a"
    assert len(curve.xi) == 33


def test_curve_with_trials_and_file_scenario(tmp_path):
    scenario_path = tmp_path / "tiny.json"
    scenario_path.write_text(json.dumps(make(xi_max=0.5)))
    out = tmp_path / "tiny.csv"
    result = run_cli(
        "curve", "--scenario", str(scenario_path), "--trials", "500", "--seed", "3",
        "--out", str(out),
    )
    assert result.returncode == 0, result.stderr
    curve = read_curve_csv(out)
    assert curve.trials == 500 and curve.seed == 3


def test_missing_scenario_is_input_error(tmp_path):
    result = run_cli("curve", "--scenario", str(tmp_path / "absent.json"))
    assert result.returncode == 2
    assert "error:" in result.stderr


def test_invalid_scenario_is_input_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(make(rho_dbm="loud")))
    result = run_cli("curve", "--scenario", str(bad))
    assert result.returncode == 2
    assert "rho_dbm" in result.stderr


def test_unknown_subcommand_is_usage_error():
    assert run_cli("frobnicate").returncode == 2


def test_surface_subcommand(tmp_path):
    out = tmp_path / "surface.csv"
    result = run_cli("surface", "--z", "2.0", "--out", str(out))
    assert result.returncode == 0, result.stderr
    lines = out.read_text().splitlines()
    assert lines[0].startswith("#")
    assert any(l.startswith("k_a") for l in lines)


def test_compare_subcommand(tmp_path):
    out = tmp_path / "cmp.csv"
    result = run_cli(
        "compare", "--scenario", "fig2c", "--models", "sinc,exponential",
        "--trials", "0", "--out", str(out),
    )
    assert result.returncode == 0, result.stderr
    assert "p_closed_form_sinc" in out.read_text()


def test_compare_rejects_unknown_model():
    result = run_cli("compare", "--scenario", "fig2c", "--models", "bogus", "--trials", "0")
    assert result.returncode == 2
    assert "bogus" in result.stderr


def test_validate_fast_subset(tmp_path):
    report = tmp_path / "report.txt"
    result = run_cli("validate", "--only", "1,2,9,10", "--out", str(report))
    assert result.returncode == 0, result.stdout + result.stderr
    lines = [l for l in result.stdout.splitlines() if l.startswith("[")]
    assert len(lines) == 4
    assert all(l.startswith("[PASS]") for l in lines)
    assert report.read_text().count("criterion") == 4


def test_validate_rejects_unknown_criterion():
    result = run_cli("validate", "--only", "99")
    assert result.returncode == 2


@pytest.mark.parametrize("flag", ["--version"])
def test_version_flag(flag):
    result = run_cli(flag)
    assert result.returncode == 0
    assert "irslink" in result.stdout
