"""Command-line entry points, run in-process."""
import json

import pytest

from colonygame import ScenarioConfig
from colonygame.cli import main


def write_config(tmp_path, **overrides):
    cfg = ScenarioConfig(horizon=20.0, seed=5).to_dict()
    cfg.update(overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg))
    return path


def test_run_with_config_and_out(tmp_path, capsys):
    cfg = write_config(tmp_path)
    out = tmp_path / "artifacts"
    assert main(["run", "--config", str(cfg), "--out", str(out)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["seed"] == 5
    assert summary["ticks"] == 200
    assert (out / "timeseries_seed5.csv").exists()
    assert (out / "events_seed5.csv").exists()


def test_run_seed_override(tmp_path, capsys):
    cfg = write_config(tmp_path)
    assert main(["run", "--config", str(cfg), "--seed", "77"]) == 0
    assert json.loads(capsys.readouterr().out)["seed"] == 77


def test_run_missing_config_fails(tmp_path, capsys):
    assert main(["run", "--config", str(tmp_path / "absent.json")]) == 1
    assert "error:" in capsys.readouterr().err


def test_sweep_writes_table(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    assert main(["sweep", "--theta-min", "0", "--theta-max", "1", "--steps", "11",
                 "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 12
    assert lines[0].startswith("theta,regime,expected_n")


def test_hetero_demo_reports_ordering(capsys):
    assert main(["hetero-demo", "--costs", "0.9", "1.0", "1.1"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["ordering_ok"]
    assert len(report["robots"]) == 3


def test_unknown_command_rejected():
    with pytest.raises(SystemExit):
        main(["frobnicate"])
