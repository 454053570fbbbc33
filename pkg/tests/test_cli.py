import json
import math
import subprocess
import sys

import numpy as np
import pytest

from coulomb_crossover.cli import main, parse_args
from coulomb_crossover.io import package_version, read_checkpoint, read_table


def run(*argv):
    return main([str(a) for a in argv])


class TestSolve2d:
    def test_header_and_plateau(self, tmp_path, capsys):
        assert run("solve2d", "--alpha", 1, "--c", 200, "--out", tmp_path) == 0
        path = tmp_path / "alpha1_c200.csv"
        assert path.read_text().splitlines()[0] == "r,g,g_limit_c0,g_limit_cinf"
        cols, _ = read_table(path)
        b = math.sqrt(400)
        bulk = (cols["r"] >= 0.1 * b) & (cols["r"] <= 0.9 * b)
        np.testing.assert_allclose(cols["g"][bulk], 1 / (400 * math.pi), rtol=0.05)
        assert str(path) in capsys.readouterr().out

    def test_alpha2_small_c_near_envelope(self, tmp_path):
        assert run("solve2d", "--alpha", 2, "--c", 0.1, "--out", tmp_path / "one.csv") == 0
        cols, _ = read_table(tmp_path / "one.csv")
        err = np.max(np.abs(cols["g"] - cols["g_limit_c0"])) / cols["g_limit_c0"].max()
        assert err < 0.1

    def test_range_error(self, tmp_path, capsys):
        assert run("solve2d", "--alpha", 1, "--c", -2.5, "--out", tmp_path) == 2
        assert "error" in capsys.readouterr().err
        assert list(tmp_path.iterdir()) == []

    def test_negative_c_has_no_large_c_envelope(self, tmp_path):
        assert run("solve2d", "--c", -1, "--out", tmp_path) == 0
        cols, _ = read_table(tmp_path / "alpha1_c-1.csv")
        assert np.all(np.isnan(cols["g_limit_cinf"]))

    def test_json(self, tmp_path):
        assert run("solve2d", "--c", 1, "--format", "json", "--out", tmp_path) == 0
        payload = json.loads((tmp_path / "alpha1_c1.json").read_text())
        assert list(payload["columns"]) == ["r", "g", "g_limit_c0", "g_limit_cinf"]
        assert payload["metadata"]["version"] == package_version()
        assert payload["metadata"]["c"] == 1.0

    def test_parallel_matches_serial(self, tmp_path, monkeypatch):
        monkeypatch.setenv("COULOMB_THREADS", "1")
        assert run("solve2d", "--c", 1, 5, "--out", tmp_path / "serial") == 0
        monkeypatch.setenv("COULOMB_THREADS", "2")
        assert run("solve2d", "--c", 1, 5, "--out", tmp_path / "parallel") == 0
        for name in ("alpha1_c1.csv", "alpha1_c5.csv"):
            assert (tmp_path / "serial" / name).read_text() == (tmp_path / "parallel" / name).read_text()


class TestDensity1d:
    def test_standard_normal(self, tmp_path):
        assert run("density1d", "--a", 0, "--c", 0, "--out", tmp_path) == 0
        path = tmp_path / "a0_c0.csv"
        assert path.read_text().splitlines()[0] == "lambda,rho,rho_c0_envelope"
        cols, _ = read_table(path)
        np.testing.assert_allclose(cols["rho"], np.exp(-cols["lambda"] ** 2 / 2) / math.sqrt(2 * math.pi),
                                   rtol=1e-12, atol=1e-300)

    def test_peaked(self, tmp_path):
        assert run("density1d", "--a", -0.5, "--c", -0.9, 10, "--out", tmp_path) == 0
        peaked, _ = read_table(tmp_path / "a-0.5_c-0.9.csv")
        broad, _ = read_table(tmp_path / "a-0.5_c10.csv")
        assert np.max(peaked["rho"]) > 5 * np.max(broad["rho"])

    def test_range_error(self, tmp_path):
        assert run("density1d", "--a", -1, "--c", 1, "--out", tmp_path) == 2
        assert run("density1d", "--a", 0, "--c", -1, "--out", tmp_path) == 2

    def test_collapse_exits_2(self, tmp_path, capsys):
        assert run("density1d", "--a", -0.5, "--c", -0.5, "--out", tmp_path) == 2
        assert "point mass" in capsys.readouterr().err


class TestSample:
    def test_deterministic(self, tmp_path):
        args = ("sample", "--dim", 2, "--c", 1, "--n", 30, "--seed", 7, "--steps", 200, "--burn-in", 100)
        assert run(*args, "--out", tmp_path / "a") == 0
        assert run(*args, "--out", tmp_path / "b") == 0
        for name in ("checkpoint.csv", "histogram.csv"):
            assert (tmp_path / "a" / name).read_text() == (tmp_path / "b" / name).read_text()
        header = (tmp_path / "a" / "histogram.csv").read_text().splitlines()[0]
        assert header == "r_lo,r_hi,r,g,g_err,g_solve2d"
        cfg, ens = read_checkpoint(tmp_path / "a" / "checkpoint.csv")
        assert cfg.n == 30 and cfg.seed == 7
        assert ens.sweep_count == 300

    def test_line(self, tmp_path):
        assert run("sample", "--dim", 1, "--a", 0, "--c", 1, "--n", 40, "--steps", 100, "--burn-in", 50,
                   "--out", tmp_path) == 0
        cols, _ = read_table(tmp_path / "histogram.csv")
        assert list(cols) == ["lambda_lo", "lambda_hi", "lambda", "rho", "rho_err", "rho_density1d"]
        width = cols["lambda_hi"] - cols["lambda_lo"]
        assert np.sum(width * cols["rho"]) == pytest.approx(1.0, abs=0.01)

    def test_invalid(self, tmp_path):
        assert run("sample", "--dim", 2, "--c", -3, "--out", tmp_path) == 2


class TestCheck:
    def test_smallest(self, tmp_path):
        out = tmp_path / "report.txt"
        assert run("check", "--only", "ward", "--n", 1, "--steps", 1000, "--out", out) == 0
        assert out.read_text().strip().endswith("overall: ok")

    def test_mutation(self, capsys):
        assert run("check", "--only", "ward", "--dim", 2, "--n", 50, "--c", 1, "--steps", 2000, "--mutate") == 1
        assert "violated: ward[" in capsys.readouterr().err

    def test_json_report(self, tmp_path):
        out = tmp_path / "r.json"
        assert run("check", "--only", "specfun", "--format", "json", "--out", out) == 0
        payload = json.loads(out.read_text())
        assert payload["all_passed"] is True


class TestConfigFile:
    def test_flags_override_file(self, tmp_path):
        cfg = tmp_path / "run.ini"
        cfg.write_text("[solve2d]\nalpha = 2\nc = 1 5\n[sample]\nburn-in = 30\n")
        args = parse_args(["solve2d", "--config", str(cfg)])
        assert args.alpha == 2.0 and args.c == [1.0, 5.0]
        args = parse_args(["solve2d", "--config", str(cfg), "--c", "3"])
        assert args.alpha == 2.0 and args.c == [3.0]
        assert parse_args(["sample", "--config", str(cfg)]).burn_in == 30

    def test_unknown_key(self, tmp_path):
        cfg = tmp_path / "bad.ini"
        cfg.write_text("[solve2d]\nbogus = 1\n")
        with pytest.raises(SystemExit) as exc:
            parse_args(["solve2d", "--config", str(cfg)])
        assert exc.value.code == 2

    def test_missing_c(self, tmp_path):
        assert run("solve2d", "--out", tmp_path) == 2


class TestEntryPoint:
    def test_version(self):
        out = subprocess.run([sys.executable, "-m", "coulomb_crossover", "--version"],
                             capture_output=True, text=True, check=True)
        assert out.stdout.strip() == package_version()

    def test_bad_flag_exits_2(self):
        out = subprocess.run([sys.executable, "-m", "coulomb_crossover", "solve2d", "--nope"],
                             capture_output=True, text=True)
        assert out.returncode == 2
