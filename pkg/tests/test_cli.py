import json
import subprocess
import sys

import pytest

from spinshor.cli import ConfigError, RunConfig, main


def test_run_shor_writes_outputs(tmp_path, capsys):
    assert main(["run-shor", "--out", str(tmp_path / "a")]) == 0
    out = capsys.readouterr().out
    assert "period T = 2" in out and "factors = 2, 4" in out
    outcome = json.loads((tmp_path / "a" / "outcome.json").read_text())
    assert outcome["period"] == 2
    names = {p.name for p in (tmp_path / "a").iterdir()}
    for stage in ("superposition", "oracle", "fourier"):
        assert f"trajectory_{stage}.csv" in names and f"spins_{stage}.csv" in names
    assert "final_distribution.csv" in names

    assert main(["run-shor", "--out", str(tmp_path / "b")]) == 0
    for name in names:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_run_shor_reports_missing_factors(tmp_path, capsys):
    assert main(["run-shor", "--jprime", "0", "--out", str(tmp_path)]) == 0
    assert "no factors" in capsys.readouterr().out


def test_sweep_and_config_file(tmp_path, capsys):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"grid_points": 2, "grid_start": 0.1, "grid_stop": 0.11,
                                  "threads": 1, "out": str(tmp_path / "s")}))
    assert main(["sweep", "--var", "omega", "--config", str(config)]) == 0
    lines = (tmp_path / "s" / "sweep_omega.csv").read_text().splitlines()
    assert len(lines) == 3 and lines[1].startswith("0.1,")
    assert "2 points" in capsys.readouterr().out


def test_rabi_table(tmp_path, capsys):
    assert main(["rabi-table", "--k-max", "5", "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "rabi_table.csv").read_text().splitlines()
    assert lines[0] == "delta_label,delta,k,omega"
    assert len(lines) == 1 + 6 * 5


def test_selftest_passes_and_fails(capsys):
    assert main(["selftest"]) == 0
    assert main(["selftest", "--step", "5e-4"]) == 1
    captured = capsys.readouterr()
    assert "FAIL" in captured.out
    assert "selftest failed" in captured.err


@pytest.mark.parametrize("argv", [
    ["run-shor", "--rabi", "0"],
    ["run-shor", "--step", "0.01"],
    ["sweep", "--var", "omega", "--grid-step", "-1"],
    ["rabi-table", "--k-min", "0"],
])
def test_usage_errors(argv, tmp_path, capsys):
    assert main(argv + ["--out", str(tmp_path)]) == 2
    assert "error" in capsys.readouterr().err


def test_bad_config_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"colour": 1}')
    assert main(["selftest", "--config", str(bad)]) == 2
    bad.write_text("[1, 2]")
    assert main(["selftest", "--config", str(bad)]) == 2
    assert main(["selftest", "--config", str(tmp_path / "missing.json")]) == 2


def test_argparse_usage_exit_code():
    proc = subprocess.run([sys.executable, "-m", "spinshor", "sweep"], capture_output=True)
    assert proc.returncode == 2


def test_run_config_grid():
    cfg = RunConfig.from_mapping({"grid_start": 0.0, "grid_stop": 0.01, "grid_step": 0.005})
    assert cfg.grid((0.0, 0.002, 0.1)) == (0.0, 0.005, 0.01)
    assert RunConfig.from_mapping({}).grid((1.0, 2.0)) == (1.0, 2.0)
    with pytest.raises(ConfigError):
        RunConfig.from_mapping({"threads": 0})
