import json
import subprocess
import sys

from lgsim.cli import main

BUDGET = {
    "scenario": "budget",
    "seed": 1,
    "output": {"format": "both"},
    "budget": {"ensemble_size": 10**6, "k": 4, "delta_p": 10.0, "var_a": 1.0},
}

VERIFY_FAST = {
    "scenario": "verify",
    "seed": 3,
    "verify": {"n_samples": 20_000, "n_random": 15},
}


def write_cfg(tmp_path, data, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


class TestExitCodes:
    def test_success(self, tmp_path, capsys):
        code = main(["budget", "--config", write_cfg(tmp_path, BUDGET),
                     "--out", str(tmp_path / "out")])
        assert code == 0
        out = capsys.readouterr().out
        assert "report.json" in out and "budget_comparison.csv" in out

    def test_validation_error_is_one(self, tmp_path, capsys):
        bad = dict(BUDGET)
        bad["surprise"] = True
        code = main(["budget", "--config", write_cfg(tmp_path, bad),
                     "--out", str(tmp_path / "out")])
        assert code == 1
        assert "config.surprise" in capsys.readouterr().err

    def test_scenario_subcommand_mismatch_is_one(self, tmp_path, capsys):
        code = main(["verify", "--config", write_cfg(tmp_path, BUDGET),
                     "--out", str(tmp_path / "out")])
        assert code == 1
        assert "scenario" in capsys.readouterr().err

    def test_unreadable_config_is_io_error(self, tmp_path, capsys):
        code = main(["budget", "--config", str(tmp_path / "missing.json"),
                     "--out", str(tmp_path / "out")])
        assert code == 3

    def test_verification_failure_is_two(self, tmp_path, capsys):
        cfg = dict(VERIFY_FAST)
        cfg["verify"] = dict(cfg["verify"], corrupt_state=True)
        code = main(["verify", "--config", write_cfg(tmp_path, cfg),
                     "--out", str(tmp_path / "out")])
        assert code == 2
        assert "state_positivity" in capsys.readouterr().err

    def test_verification_pass_is_zero(self, tmp_path):
        code = main(["verify", "--config", write_cfg(tmp_path, VERIFY_FAST),
                     "--out", str(tmp_path / "out")])
        assert code == 0

    def test_unwritable_out_dir_is_io_error(self, tmp_path, capsys):
        blocker = tmp_path / "blocked"
        blocker.write_text("a file, not a directory")
        code = main(["budget", "--config", write_cfg(tmp_path, BUDGET),
                     "--out", str(blocker)])
        assert code == 3
        assert "i/o error" in capsys.readouterr().err

    def test_bad_seed_override_is_one(self, tmp_path, capsys):
        code = main(["budget", "--config", write_cfg(tmp_path, BUDGET),
                     "--seed", "-4", "--out", str(tmp_path / "out")])
        assert code == 1


class TestOverrides:
    def test_seed_override_lands_in_report(self, tmp_path):
        out = tmp_path / "out"
        main(["budget", "--config", write_cfg(tmp_path, BUDGET),
              "--seed", "99", "--out", str(out)])
        report = json.loads((out / "report.json").read_text())
        assert report["seed"] == 99
        assert report["config"]["seed"] == 99

    def test_format_override_json_only(self, tmp_path):
        out = tmp_path / "out"
        code = main(["budget", "--config", write_cfg(tmp_path, BUDGET),
                     "--out", str(out), "--format", "json"])
        assert code == 0
        assert (out / "report.json").exists()
        assert not (out / "budget_comparison.csv").exists()

    def test_env_var_supplies_default_out_dir(self, tmp_path, monkeypatch):
        envdir = tmp_path / "from_env"
        monkeypatch.setenv("LGSIM_OUT_DIR", str(envdir))
        cfg = {k: v for k, v in BUDGET.items() if k != "output"}
        code = main(["budget", "--config", write_cfg(tmp_path, cfg)])
        assert code == 0
        assert (envdir / "report.json").exists()


class TestDeterministicReports:
    def test_single_worker_reruns_identical(self, tmp_path):
        cfg_path = write_cfg(tmp_path, {
            "scenario": "lg_run",
            "seed": 12,
            "system": {
                "dim": 2,
                "hamiltonian": [[0, 0], [0.5, 0], [0.5, 0], [0, 0]],
                "observable": [[1, 0], [0, 0], [0, 0], [-1, 0]],
                "initial_state": [[1, 0], [0, 0], [0, 0], [0, 0]],
            },
            "pointer": {"width": 10.0},
            "plan": {"k": 3, "times": [0.0, 1.0, 2.0]},
            "run": {"n_strong": 5000, "n_weak": 5000},
        })
        payloads = []
        for sub in ("a", "b"):
            out = tmp_path / sub
            assert main(["lg-run", "--config", cfg_path, "--out", str(out)]) == 0
            report = json.loads((out / "report.json").read_text())
            payloads.append(json.dumps(report["payload"], sort_keys=True))
        assert payloads[0] == payloads[1]


class TestConsoleEntry:
    def test_module_invocation(self, tmp_path):
        cfg_path = write_cfg(tmp_path, BUDGET)
        proc = subprocess.run(
            [sys.executable, "-m", "lgsim", "budget", "--config", cfg_path,
             "--out", str(tmp_path / "out")],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        assert "report.json" in proc.stdout

    def test_help_lists_subcommands(self):
        proc = subprocess.run(
            [sys.executable, "-m", "lgsim", "--help"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        for sub in ("budget", "lg-run", "verify", "sweep"):
            assert sub in proc.stdout
