import json
import subprocess
import sys


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "decoquench.cli", *args],
        capture_output=True,
        text=True,
    )


def test_theory_defaults_to_stdout():
    proc = run_cli("theory", "--env-dim", "16", "--seed", "3", "--epsilon", "0.01")
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert report["config"]["model"]["env_dim"] == 16
    assert report["statistics"]["sigma_v"] > 0


def test_evolve_writes_outputs(tmp_path):
    proc = run_cli(
        "evolve", "--env-dim", "16", "--seed", "3", "--epsilon", "0.01", "--out", str(tmp_path)
    )
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "evolve.csv").exists()
    assert (tmp_path / "evolve.json").exists()
    note = json.loads(proc.stdout)
    assert note["written"] == ["evolve.csv", "evolve.json"]


def test_evolve_without_out_dir_is_config_error(tmp_path):
    proc = run_cli("evolve", "--env-dim", "16")
    assert proc.returncode == 2
    assert "outputs" in proc.stderr


def test_config_file_with_unknown_key_exits_2(tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text('{"model": {"env_dim": 8, "wobble": 1}}')
    proc = run_cli("theory", "--config", str(cfg))
    assert proc.returncode == 2
    assert "model.wobble" in proc.stderr


def test_missing_config_file_exits_2():
    proc = run_cli("theory", "--config", "/nonexistent/config.json")
    assert proc.returncode == 2


def test_sweep_cli(tmp_path):
    cfg = tmp_path / "sweep.json"
    cfg.write_text(
        json.dumps(
            {
                "model": {"env_dim": 16, "seed": 3},
                "grid": {"n_steps": 200},
                "sweep": {"epsilons": [0.01, 0.1, 0.6], "seeds_per_point": 1},
            }
        )
    )
    proc = run_cli("sweep", "--config", str(cfg), "--out", str(tmp_path / "out"))
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "out" / "sweep.csv").exists()
    assert (tmp_path / "out" / "sweep.json").exists()


def test_override_flags_change_record(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text('{"model": {"env_dim": 16, "seed": 3, "epsilon": 0.01}}')
    proc = run_cli("theory", "--config", str(cfg), "--offdiag-scale", "0.5", "--seed", "8")
    report = json.loads(proc.stdout)
    assert report["config"]["model"]["offdiag_coupling_scale"] == 0.5
    assert report["config"]["model"]["seed"] == 8


def test_goe_check_pass():
    proc = run_cli("goe-check", "--dim", "200", "--seed", "42")
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert report["ok"] is True
    assert report["max_asymmetry"] == 0.0
    assert 0.9 <= report["offdiag_variance"] <= 1.1


def test_goe_check_standard_convention():
    proc = run_cli("goe-check", "--dim", "150", "--seed", "7", "--convention", "standard-goe")
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert 1.5 <= report["diag_variance"] <= 2.5


def test_unknown_subcommand_exits_2():
    proc = run_cli("frobnicate")
    assert proc.returncode == 2
