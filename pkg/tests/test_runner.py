"""Scenario runner: artifacts, determinism, sweeps, and the two demos."""
import json
import math

import numpy as np
import pytest

from colonygame import (
    Feedback,
    ScenarioConfig,
    ScriptEvent,
    UtilityParams,
    WorldConfig,
    run_collapse_demo,
    run_heterogeneity_demo,
    run_replicates,
    run_scenario,
    sweep_equilibrium,
)
from colonygame.runner import TIMESERIES_COLUMNS, make_state, tick_diagnostics

NO_FORAGE = UtilityParams(c_a=2.0, kappa=0.25, lam=0.0, feedback=Feedback.NONE)
SHORT = ScenarioConfig(horizon=30.0, seed=7)


class TestConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            ScenarioConfig(horizon=0.0)
        with pytest.raises(ValueError):
            ScenarioConfig(replicates=0)
        with pytest.raises(ValueError):
            ScenarioConfig(
                events=(
                    ScriptEvent(time=10.0, action="recruit", k=1),
                    ScriptEvent(time=5.0, action="release", k=1),
                )
            )

    def test_paper_scenario_shape(self):
        cfg = ScenarioConfig.paper_scenario(seed=3)
        assert cfg.horizon == 1800.0
        assert cfg.seed == 3
        (ev,) = cfg.events
        assert (ev.time, ev.action, ev.k) == (900.0, "recruit", 6)

    def test_json_round_trip(self, tmp_path):
        cfg = ScenarioConfig(
            world=WorldConfig(n_robots=5, initial_energy=20.0),
            params=UtilityParams(c_a=1.1, kappa=0.3, lam=2.0),
            seed=9,
            horizon=120.0,
            events=(ScriptEvent(time=60.0, action="recruit", k=2, selection="idle_first"),),
            costs=(1.0, 1.1, 1.2, 1.3, 1.4),
        )
        path = tmp_path / "scenario.json"
        path.write_text(json.dumps(cfg.to_dict()))
        assert ScenarioConfig.from_json(path) == cfg

    def test_missing_config_file_raises(self, tmp_path):
        with pytest.raises(OSError):
            ScenarioConfig.from_json(tmp_path / "nope.json")


class TestTickDiagnostics:
    def test_initial_row(self):
        state = make_state(SHORT)
        row = dict(zip(TIMESERIES_COLUMNS, tick_diagnostics(state)))
        assert row["t"] == 0.0
        assert row["s"] == 0.5 and row["theta"] == 0.5
        assert row["colony_energy"] == 50.0
        assert row["total_energy"] == 50.0
        assert row["n_foragers"] == 0
        assert row["expected_n"] == pytest.approx(math.log(22.0) - 1.0, abs=1e-12)
        assert row["p"] == pytest.approx((math.log(22.0) - 1.0) / 12.0, abs=1e-12)
        assert row["active_n"] == 12

    def test_expected_clamped_to_population(self):
        cfg = ScenarioConfig(world=WorldConfig(n_robots=1, initial_energy=1.0), horizon=1.0)
        state = make_state(cfg)
        row = dict(zip(TIMESERIES_COLUMNS, tick_diagnostics(state)))
        assert row["expected_n"] <= 1.0


class TestRunScenario:
    def test_row_count_and_artifacts(self, tmp_path):
        cfg = ScenarioConfig(horizon=30.0, seed=7, out_dir=str(tmp_path))
        result = run_scenario(cfg)
        assert len(result.rows) == 300
        ts = (tmp_path / "timeseries_seed7.csv").read_text().splitlines()
        assert ts[0] == ",".join(TIMESERIES_COLUMNS)
        assert len(ts) == 301
        assert (tmp_path / "events_seed7.csv").exists()
        summary = json.loads((tmp_path / "summary_seed7.json").read_text())
        assert summary["ticks"] == 300
        assert summary["seed"] == 7
        assert summary["final_energy"] == pytest.approx(result.summary["final_energy"])

    def test_column_accessor(self):
        result = run_scenario(SHORT)
        t = result.column("t")
        assert t[0] == 0.0 and t[-1] == pytest.approx(29.9)
        assert (np.diff(t) > 0).all()
        assert (result.column("total_energy") >= result.column("colony_energy") - 1e-12).all()

    def test_byte_identical_reruns(self, tmp_path):
        outs = []
        for name in ("a", "b"):
            d = tmp_path / name
            run_scenario(ScenarioConfig(horizon=60.0, seed=11, out_dir=str(d)))
            outs.append(d)
        for fname in ("timeseries_seed11.csv", "events_seed11.csv", "summary_seed11.json"):
            assert (outs[0] / fname).read_bytes() == (outs[1] / fname).read_bytes()

    def test_replicates_use_distinct_seeds(self):
        cfg = ScenarioConfig(horizon=10.0, seed=20, replicates=3)
        results = run_replicates(cfg)
        assert [r.seed for r in results] == [20, 21, 22]

    def test_depletion_without_foraging(self):
        cfg = ScenarioConfig(params=NO_FORAGE, horizon=520.0, seed=0)
        result = run_scenario(cfg)
        depletions = [e for e in result.events if e.kind == "depletion"]
        assert len(depletions) == 1
        assert depletions[0].time == pytest.approx(500.0, abs=cfg.world.dt)
        assert not result.summary["survived"]
        assert result.summary["deposits"] == 0


class TestSweep:
    def test_mixed_band_values(self, tmp_path):
        params = UtilityParams()
        out = tmp_path / "sweep.csv"
        rows = sweep_equilibrium(params, [0.0, 0.5, 0.75, 0.9], out_path=out)
        by_theta = {r[0]: r for r in rows}
        assert by_theta[0.5][1] == "mixed"
        assert by_theta[0.5][2] == pytest.approx(math.log(22.0) - 1.0, abs=1e-12)
        assert by_theta[0.9][1] == "dominant_forage"
        assert by_theta[0.9][2] == 12.0  # clamped to the population
        # theta = 0.75 sits exactly at c_a - kappa: foraging weakly dominant.
        assert by_theta[0.75][1] == "dominant_forage"
        # pi columns bracket the band.
        assert by_theta[0.5][4] > 0 > by_theta[0.5][5]
        lines = out.read_text().splitlines()
        assert len(lines) == 5

    def test_unit_band_edges(self):
        params = UtilityParams(c_a=1.25, kappa=0.25, lam=math.e)
        rows = sweep_equilibrium(params, np.linspace(0.0, 0.999, 50))
        expected = [r[2] for r in rows]
        assert expected[0] == pytest.approx(0.0, abs=1e-12)
        assert all(b > a for a, b in zip(expected, expected[1:]))

    def test_no_feedback_is_all_or_nothing(self):
        params = UtilityParams(c_a=1.0, kappa=0.25, lam=0.0, feedback=Feedback.NONE)
        rows = sweep_equilibrium(params, [0.0, 0.5, 0.74, 0.76, 1.0])
        regimes = [r[1] for r in rows]
        assert regimes == [
            "dominant_idle", "dominant_idle", "dominant_idle",
            "dominant_forage", "dominant_forage",
        ]


class TestCollapseDemo:
    def test_collapse_and_recovery(self, tmp_path):
        verdict = run_collapse_demo(seed=0, out_dir=tmp_path)
        assert verdict["collapse_confirmed"], verdict["positive"]
        assert verdict["resilience_confirmed"], verdict["negative"]
        assert verdict["positive"]["new_foragers_after_removal"] == 0
        assert verdict["positive"]["final_foragers"] == 0
        assert verdict["negative"]["recovery_ticks"] <= 200
        assert (tmp_path / "collapse_verdict.json").exists()
        assert (tmp_path / "collapse_positive.csv").exists()

    def test_rejects_negative_feedback_params(self):
        with pytest.raises(ValueError):
            run_collapse_demo(params_positive=UtilityParams())


class TestHeterogeneityDemo:
    def test_crossing_order_and_gaps(self, tmp_path):
        out = tmp_path / "hetero.json"
        report = run_heterogeneity_demo(costs=(0.9, 1.0, 1.1), out_path=out)
        assert report["ordering_ok"]
        robots = report["robots"]
        crossings = [r["crossing_theta"] for r in robots]
        analytic = [c - 0.25 - 0.5 * math.exp(-1.0) for c in (0.9, 1.0, 1.1)]
        for got, want in zip(crossings, analytic):
            assert got == pytest.approx(want, abs=2e-4)
        # Equal cost increments shift the crossing by exactly that increment.
        assert crossings[1] - crossings[0] == pytest.approx(0.1, abs=2e-4)
        assert crossings[2] - crossings[1] == pytest.approx(0.1, abs=2e-4)
        for r in robots:
            assert r["first_forage_time"] == pytest.approx(
                r["crossing_theta"] * 1000.0, rel=1e-9
            )
        assert json.loads(out.read_text())["ordering_ok"]
