import json
import subprocess
import sys
from pathlib import Path

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def run_cli(args, cwd):
    return subprocess.run(
        [sys.executable, "-m", "qstego.cli", *args],
        capture_output=True,
        text=True,
        cwd=cwd,
    )


class TestCli:
    def test_simulate_exits_zero_on_pass(self, tmp_path):
        cp = run_cli(
            [
                "simulate",
                "cc-noiseless",
                "--config",
                str(CONFIGS / "stego_cc_noiseless_exact.json"),
                "--out",
                str(tmp_path),
            ],
            cwd=tmp_path,
        )
        assert cp.returncode == 0, cp.stderr
        assert (tmp_path / "stego_cc_noiseless_exact.csv").exists()
        assert (tmp_path / "stego_cc_noiseless_exact_summary.json").exists()
        assert "bound_ok: pass" in cp.stdout

    def test_csv_only_flag(self, tmp_path):
        cp = run_cli(
            [
                "verify",
                "sutherland",
                "--config",
                str(CONFIGS / "sutherland_demo.json"),
                "--out",
                str(tmp_path),
                "--csv",
            ],
            cwd=tmp_path,
        )
        assert cp.returncode == 0, cp.stderr
        assert (tmp_path / "sutherland_demo.csv").exists()
        assert not (tmp_path / "sutherland_demo_summary.json").exists()

    def test_malformed_config_line_anchored(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{\n  "kind": "simulate/qc-cc",\n  "params": {,}\n}\n')
        cp = run_cli(
            ["simulate", "qc-cc", "--config", str(bad), "--out", str(tmp_path)],
            cwd=tmp_path,
        )
        assert cp.returncode == 2
        assert "bad.json:3:" in cp.stderr

    def test_kind_mismatch_rejected(self, tmp_path):
        cp = run_cli(
            [
                "simulate",
                "es-rs",
                "--config",
                str(CONFIGS / "stego_qc_cc_demo.json"),
                "--out",
                str(tmp_path),
            ],
            cwd=tmp_path,
        )
        assert cp.returncode == 2
        assert "does not match" in cp.stderr

    def test_seed_flag_reaches_summary(self, tmp_path):
        cp = run_cli(
            [
                "simulate",
                "qc-cc",
                "--config",
                str(CONFIGS / "stego_qc_cc_demo.json"),
                "--out",
                str(tmp_path),
                "--seed",
                "42",
            ],
            cwd=tmp_path,
        )
        assert cp.returncode == 0, cp.stderr
        payload = json.loads((tmp_path / "stego_qc_cc_demo_summary.json").read_text())
        assert payload["seed"] == 42

    def test_rerun_byte_identical(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        for out in (a, b):
            cp = run_cli(
                [
                    "simulate",
                    "cc-noisy",
                    "--config",
                    str(CONFIGS / "stego_cc_noisy_demo.json"),
                    "--out",
                    str(out),
                ],
                cwd=tmp_path,
            )
            assert cp.returncode == 0, cp.stderr
        assert (a / "stego_cc_noisy_demo.csv").read_bytes() == (
            b / "stego_cc_noisy_demo.csv"
        ).read_bytes()


class TestExitCodes:
    def test_failing_flag_exits_one(self, tmp_path):
        config = {
            "kind": "simulate/resolvability",
            "seed": 0,
            "params": {
                "pmf": [0.5, 0.5],
                "outputs": ["zero", "plus"],
                "mk_grid": [32, 2],
                "seeds": 10,
            },
        }
        path = tmp_path / "bad_trend.json"
        path.write_text(json.dumps(config))
        cp = run_cli(
            ["simulate", "resolvability", "--config", str(path), "--out", str(tmp_path)],
            cwd=tmp_path,
        )
        assert cp.returncode == 1
        assert "medians_strictly_decreasing: FAIL" in cp.stdout
