import json
import os
import subprocess
import sys

import pytest

from netcomm import __version__
from netcomm.cli import main, resolve_seed
from netcomm.experiments import phase_classify
from netcomm.rng import DEFAULT_SEED


def run(*args, env=None, cwd=None):
    full_env = dict(os.environ)
    full_env.pop("NETCOMM_SEED", None)
    full_env.update(env or {})
    return subprocess.run([sys.executable, "-m", "netcomm", *args], capture_output=True,
                          text=True, env=full_env, cwd=cwd)


@pytest.fixture
def files(tmp_path):
    (tmp_path / "k4.edges").write_text("0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n")
    (tmp_path / "c4.edges").write_text("0 1\n1 2\n2 3\n3 0\n")
    (tmp_path / "p4.edges").write_text("0 1\n1 2\n2 3\n")
    (tmp_path / "loop.edges").write_text("0 1\n1 1\n")
    (tmp_path / "bad.edges").write_text("0 1 2\n")
    (tmp_path / "empty.edges").write_text("n=6\n")
    (tmp_path / "m.json").write_text('{"n": 100, "N": 10, "a": 0.5, "c": 0.1}')
    (tmp_path / "infeasible.json").write_text('{"n": 100, "N": 10, "a": 0.95, "c": 0.1}')
    return tmp_path


def test_test_sgnq(files):
    r = run("test", "sgnq", str(files / "k4.edges"))
    assert r.returncode == 0, r.stderr
    d = json.loads(r.stdout)
    assert d["statistic"] == pytest.approx(0.09375, abs=1e-10)
    assert d["standardized"] == pytest.approx(-0.69886, abs=1e-4)
    assert d["seed"] == DEFAULT_SEED and d["version"] == __version__


def test_test_chi2_and_est(files):
    d = json.loads(run("test", "chi2", str(files / "c4.edges")).stdout)
    assert d["statistic"] == pytest.approx(8 / 3)
    d = json.loads(run("test", "est", str(files / "p4.edges"), "--v", "3", "--e", "3").stdout)
    assert d["statistic"] == 2 and d["reject"] is False


def test_test_scan_csv(files):
    r = run("test", "scan", str(files / "k4.edges"), "--N", "2", "--cstar", "1.5", "--format", "csv")
    assert r.returncode == 0, r.stderr
    assert "# seed=" in r.stdout and "statistic" in r.stdout


def test_model_describe(files):
    d = json.loads(run("model", "describe", str(files / "m.json")).stdout)
    assert d["b"] == pytest.approx(0.05)
    assert d["alpha"] == pytest.approx(0.095)
    assert d["lambda1"] == pytest.approx(9.5)
    assert d["tilde_lambda"] == pytest.approx(4.5)


@pytest.mark.parametrize("args,code,tag", [
    (["test", "sgnq", "missing.edges"], 1, "usage"),
    (["test", "sgnq", "k4.edges", "--bogus"], 1, "usage"),
    (["frobnicate"], 1, "usage"),
    (["test", "sgnq", "k4.edges", "--level", "1.5"], 1, "usage"),
    (["test", "scan", "k4.edges"], 1, "usage"),
    (["test", "sgnq", "k4.edges", "--two-sided"], 1, "usage"),
    (["test", "sgnq", "loop.edges"], 2, "self_loop"),
    (["test", "sgnq", "bad.edges"], 2, "parse_error"),
    (["test", "chi2", "empty.edges"], 2, "degenerate_input"),
    (["model", "describe", "infeasible.json"], 2, "infeasible_alternative"),
    (["simulate", "chi2-vs-sgnq", "--reps", "2", "--a-grid", "0.95,0.99"], 2, "infeasible_alternative"),
])
def test_exit_codes(files, args, code, tag):
    r = run(*args, cwd=files)
    assert r.returncode == code, r.stderr
    assert json.loads(r.stderr)["error"] == tag


def test_internal_error_exit_code(monkeypatch, capsys):
    import netcomm.cli as cli

    def boom(args, seed):
        raise RuntimeError("boom")

    monkeypatch.setitem(cli.COMMANDS, "phase", boom)
    assert main(["phase"]) == 3
    assert json.loads(capsys.readouterr().err)["error"] == "internal"


def test_seed_resolution():
    assert resolve_seed(5, {"NETCOMM_SEED": "9"}) == 5
    assert resolve_seed(None, {"NETCOMM_SEED": "9"}) == 9
    assert resolve_seed(None, {}) == DEFAULT_SEED


def test_env_seed_and_bad_env(files):
    r = run("phase", "--betas", "0.5", "--gammas", "0.1", env={"NETCOMM_SEED": "42"})
    assert "# seed=42" in r.stdout
    r = run("phase", "--betas", "0.5", "--gammas", "0.1", "--seed", "7", env={"NETCOMM_SEED": "42"})
    assert "# seed=7" in r.stdout
    r = run("phase", env={"NETCOMM_SEED": "abc"})
    assert r.returncode == 1


def test_simulate_rows_and_determinism(files):
    args = ["simulate", "chi2-vs-sgnq", "--n", "100", "--N", "10", "--c", "0.1",
            "--mode", "matched", "--reps", "50", "--seed", "7"]
    a = run(*args)
    b = run(*args, "--threads", "2")
    assert a.returncode == 0, a.stderr
    assert a.stdout == b.stdout
    data = [ln for ln in a.stdout.splitlines() if not ln.startswith("#")]
    assert len(data) == 21  # header + 20 rows
    assert f"netcomm {__version__}" in a.stdout and "# seed=7" in a.stdout


def test_simulate_scan_markers(files):
    r = run("simulate", "scan-vs-sgnq", "--n", "16", "--N", "3", "--alpha", "0.3",
            "--m-cal", "10", "--reps", "8", "--points", "4", "--seed", "1")
    assert r.returncode == 0, r.stderr
    header = [ln for ln in r.stdout.splitlines() if not ln.startswith("#")][0]
    assert "a_stat_marker" in header and "a_comp_marker" in header


def test_out_file_and_json(files):
    out = files / "p.json"
    r = run("phase", "--betas", "0.2,0.5", "--gammas", "0.25", "--format", "json", "--out", str(out))
    assert r.returncode == 0 and r.stdout == ""
    doc = json.loads(out.read_text())
    assert [row["region"] for row in doc["rows"]] == ["SgnqPowerful", "Boundary"]


def test_phase_delegates(files):
    r = run("phase", "--beta-points", "3", "--gamma-points", "3")
    lines = [ln for ln in r.stdout.splitlines() if not ln.startswith("#")][1:]
    assert len(lines) == 9
    for ln in lines:
        b, g, label = ln.split(",")
        assert phase_classify(float(b), float(g)).value == label


def test_version():
    r = run("--version")
    assert r.returncode == 0 and __version__ in r.stdout
