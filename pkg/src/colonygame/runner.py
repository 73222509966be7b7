"""Scenario execution and analysis sweeps with CSV artifacts.

Everything here is deterministic given the scenario seed; CSV files are
written with fixed formatting so identical runs produce byte-identical
artifacts.
"""
from __future__ import annotations

import dataclasses
import json
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .mechanism import (
    Feedback,
    Regime,
    UtilityParams,
    dominance_bounds,
    equilibrium_foragers,
    finite_threshold,
    forage_probability,
    marginal_utility,
    positive_feedback_bounds,
)
from .safety import SafetyConfig
from .world import Event, ScriptEvent, SimState, WorldConfig, recruit, signal, step

TIMESERIES_COLUMNS = (
    "t", "s", "theta", "colony_energy", "total_energy",
    "n_foragers", "expected_n", "p", "active_n",
)
EVENT_COLUMNS = ("tick", "time", "kind", "robot", "x", "y", "theta", "n_star", "value")


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, str):
        return v
    return format(float(v), ".12g")


def write_csv(path: Path, header: tuple[str, ...], rows) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join(_fmt(v) for v in row) + "\n")
    except OSError as exc:
        raise OSError(f"failed writing CSV to {path}: {exc}") from exc


@dataclass(frozen=True)
class ScenarioConfig:
    world: WorldConfig = field(default_factory=WorldConfig)
    params: UtilityParams = field(default_factory=UtilityParams)
    safety: SafetyConfig | None = None
    seed: int = 0
    horizon: float = 1800.0
    events: tuple[ScriptEvent, ...] = ()
    out_dir: str | None = None
    replicates: int = 1
    costs: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if self.horizon <= 0:
            raise ValueError(f"horizon must be > 0, got {self.horizon}")
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        times = [e.time for e in self.events]
        if times != sorted(times):
            raise ValueError("events must be time-ordered")

    @classmethod
    def paper_scenario(cls, seed: int = 0, out_dir: str | None = None) -> "ScenarioConfig":
        """Default 1800 s run with 6 of 12 robots recruited at t = 900."""
        return cls(
            seed=seed,
            out_dir=out_dir,
            events=(ScriptEvent(time=900.0, action="recruit", k=6, selection="random"),),
        )

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "horizon": self.horizon,
            "replicates": self.replicates,
            "out_dir": self.out_dir,
            "world": dataclasses.asdict(self.world),
            "params": {
                "c_a": self.params.c_a,
                "kappa": self.params.kappa,
                "lam": self.params.lam,
                "feedback": self.params.feedback.value,
            },
            "safety": dataclasses.asdict(self.safety) if self.safety else None,
            "costs": list(self.costs) if self.costs else None,
            "events": [dataclasses.asdict(e) for e in self.events],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioConfig":
        world_d = dict(data.get("world") or {})
        if "source_annulus" in world_d:
            world_d["source_annulus"] = tuple(world_d["source_annulus"])
        params_d = dict(data.get("params") or {})
        if "feedback" in params_d:
            params_d["feedback"] = Feedback(params_d["feedback"])
        safety_d = data.get("safety")
        return cls(
            world=WorldConfig(**world_d),
            params=UtilityParams(**params_d),
            safety=SafetyConfig(**safety_d) if safety_d else None,
            seed=int(data.get("seed", 0)),
            horizon=float(data.get("horizon", 1800.0)),
            events=tuple(ScriptEvent(**e) for e in data.get("events") or ()),
            out_dir=data.get("out_dir"),
            replicates=int(data.get("replicates", 1)),
            costs=tuple(data["costs"]) if data.get("costs") else None,
        )

    @classmethod
    def from_json(cls, path: str | Path) -> "ScenarioConfig":
        try:
            with open(path, encoding="utf-8") as fh:
                return cls.from_dict(json.load(fh))
        except OSError as exc:
            raise OSError(f"failed reading config {path}: {exc}") from exc


def make_state(config: ScenarioConfig, seed: int | None = None) -> SimState:
    return SimState(
        config=config.world,
        params=config.params,
        safety=config.safety,
        seed=config.seed if seed is None else seed,
        costs=list(config.costs) if config.costs else None,
        event_script=config.events,
    )


def tick_diagnostics(state: SimState) -> tuple:
    """One timeseries row captured at the start of a tick."""
    s, theta = signal(state)
    th = theta.value
    n_active = state.n_active
    n_star = state.n_foragers
    forager_consumed = float(state.consumed[state.active & (state.mode != 0)].sum())
    if n_active > 0:
        res = equilibrium_foragers(th, state.params) if (
            state.params.feedback is Feedback.NEGATIVE
        ) else None
        if res is None:
            expected = float("nan")
            p = forage_probability(th, n_star, n_active, state.params)
        else:
            expected = min(float(n_active), max(0.0, res.expected_n))
            p = forage_probability(th, n_star, n_active, state.params)
    else:
        expected = 0.0
        p = 0.0
    return (
        state.clock, s, th, state.colony.energy,
        state.colony.energy + forager_consumed,
        n_star, expected, p, n_active,
    )


@dataclass
class ScenarioResult:
    config: ScenarioConfig
    seed: int
    rows: list[tuple]
    events: list[Event]
    summary: dict

    def column(self, name: str) -> np.ndarray:
        idx = TIMESERIES_COLUMNS.index(name)
        return np.array([row[idx] for row in self.rows])


def run_scenario(config: ScenarioConfig, seed: int | None = None) -> ScenarioResult:
    """Run one replicate and (optionally) write CSV + summary artifacts."""
    state = make_state(config, seed=seed)
    n_ticks = round(config.horizon / config.world.dt)
    rows = []
    deposits = 0
    for _ in range(n_ticks):
        rows.append(tick_diagnostics(state))
        step(state)

    events = state.event_log
    deposits = sum(1 for e in events if e.kind == "deposit")
    energy = np.array([r[3] for r in rows])
    foragers = np.array([r[5] for r in rows], dtype=float)
    expected = np.array([r[6] for r in rows], dtype=float)
    summary = {
        "seed": state.seed,
        "horizon": config.horizon,
        "ticks": n_ticks,
        "final_energy": state.colony.energy,
        "min_energy": float(energy.min()),
        "survived": bool(energy.min() > 0.0 and state.colony.energy > 0.0),
        "deposits": deposits,
        "faults": sum(1 for e in events if e.kind == "fault"),
        "time_avg_foragers": float(foragers.mean()),
        "time_avg_expected_n": (
            float(np.nanmean(expected)) if not np.isnan(expected).all() else None
        ),
        "min_pairwise_distance": state.min_pairwise if math.isfinite(state.min_pairwise) else None,
        "max_radius": state.max_radius,
    }
    result = ScenarioResult(config, state.seed, rows, events, summary)
    if config.out_dir is not None:
        out = Path(config.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        tag = f"seed{state.seed}"
        write_csv(out / f"timeseries_{tag}.csv", TIMESERIES_COLUMNS, rows)
        write_csv(
            out / f"events_{tag}.csv",
            EVENT_COLUMNS,
            [
                (e.tick, e.time, e.kind, e.robot, e.x, e.y, e.theta, e.n_star, e.value)
                for e in events
            ],
        )
        with open(out / f"summary_{tag}.json", "w", encoding="utf-8") as fh:
            json.dump(summary, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return result


def run_replicates(config: ScenarioConfig) -> list[ScenarioResult]:
    return [run_scenario(config, seed=config.seed + r) for r in range(config.replicates)]


def sweep_equilibrium(
    params: UtilityParams,
    thetas,
    n_active: int = 12,
    out_path: str | Path | None = None,
) -> list[tuple]:
    """Tabulate regime, expected foragers, and bounds over a theta grid."""
    rows = []
    for th in thetas:
        if params.feedback is Feedback.NEGATIVE:
            res = equilibrium_foragers(float(th), params)
            regime = res.regime.value
            expected = min(float(n_active), max(0.0, res.expected_n))
        else:
            # Without negative feedback the best response is all-or-nothing.
            pi = marginal_utility(max(0, n_active - 1), float(th), params)
            regime = Regime.DOMINANT_FORAGE.value if pi > 0 else Regime.DOMINANT_IDLE.value
            expected = float(n_active) if pi > 0 else 0.0
        rows.append(
            (
                float(th),
                regime,
                expected,
                finite_threshold(n_active, params)
                if params.feedback is Feedback.NEGATIVE
                else params.c_a - params.kappa,
                marginal_utility(0.0, float(th), params),
                -params.c_a + params.kappa + float(th),
            )
        )
    if out_path is not None:
        write_csv(
            Path(out_path),
            ("theta", "regime", "expected_n", "finite_threshold", "pi_no_crowd", "pi_full_crowd"),
            rows,
        )
    return rows


# -- demos -----------------------------------------------------------------

# Forage dominance being unreachable is intentional here: the point of the
# demo is that once foragers are removed, nothing re-enters foraging.
with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    COLLAPSE_POSITIVE_PARAMS = UtilityParams(
        c_a=1.887, kappa=0.25, lam=1.087, feedback=Feedback.POSITIVE
    )


def _run_removal_script(
    params: UtilityParams,
    seed: int,
    energy_trigger: float,
    post_window: float,
    initial_energy: float,
) -> tuple[SimState, list[tuple], int, float]:
    """Run until colony energy reaches the trigger, remove every forager,
    then run a fixed post-removal window.  Returns (state, rows, removal
    tick, foragers removed)."""
    world = WorldConfig(initial_energy=initial_energy)
    state = SimState(config=world, params=params, seed=seed)
    rows = []
    removal_tick = -1
    removed = 0
    max_establish_ticks = round(1200.0 / world.dt)
    while removal_tick < 0 and state.tick < max_establish_ticks:
        rows.append(tick_diagnostics(state))
        if state.colony.energy >= energy_trigger and state.n_foragers > 0:
            removal_tick = state.tick
            removed = state.n_foragers
            recruit(state, removed, selection="foragers_first")
        step(state)
    post_ticks = round(post_window / world.dt)
    for _ in range(post_ticks):
        rows.append(tick_diagnostics(state))
        step(state)
    return state, rows, removal_tick, removed


def run_collapse_demo(
    params_positive: UtilityParams | None = None,
    seed: int = 0,
    out_dir: str | Path | None = None,
    energy_trigger: float = 25.0,
    post_window: float = 150.0,
) -> dict:
    """Cascading failure under positive feedback vs recovery under negative.

    Both runs share the same script: let foragers establish from a nearly
    empty colony, then remove every forager once the energy recovers to the
    trigger level.  Under positive feedback no idle robot steps in while the
    urgency stays below the forage-dominance threshold; under negative
    feedback replacements appear within a couple hundred ticks.
    """
    params = params_positive or COLLAPSE_POSITIVE_PARAMS
    if params.feedback is not Feedback.POSITIVE:
        raise ValueError("collapse demo requires positive-feedback params")
    state, rows, removal_tick, removed = _run_removal_script(
        params, seed, energy_trigger, post_window, initial_energy=3.0
    )
    dt = state.config.dt
    _, forage_above = positive_feedback_bounds(params)
    post = [r for r in rows if r[0] > removal_tick * dt]
    theta_ok = all(r[2] < forage_above for r in post)
    energies = [r[3] for r in post]
    energy_monotone = all(b < a for a, b in zip(energies, energies[1:]))
    new_foragers = sum(
        1 for e in state.event_log if e.kind == "decide" and e.tick > removal_tick
    )
    final_foragers = state.n_foragers
    positive_verdict = {
        "removal_time": removal_tick * dt,
        "foragers_removed": removed,
        "energy_at_removal": energies[0] if post else None,
        "theta_stayed_below_dominance": theta_ok,
        "energy_monotone_decay": energy_monotone,
        "new_foragers_after_removal": new_foragers,
        "final_foragers": final_foragers,
        "collapsed": theta_ok and energy_monotone and new_foragers == 0 and final_foragers == 0,
    }

    neg_params = UtilityParams()
    neg_state, neg_rows, neg_tick, neg_removed = _run_removal_script(
        neg_params, seed, energy_trigger, post_window, initial_energy=3.0
    )
    recovery = [
        e.tick - neg_tick
        for e in neg_state.event_log
        if e.kind == "decide" and e.tick > neg_tick
    ]
    negative_verdict = {
        "removal_time": neg_tick * dt,
        "foragers_removed": neg_removed,
        "recovery_ticks": min(recovery) if recovery else None,
        "recovered": bool(recovery and min(recovery) <= 200),
    }
    verdict = {
        "positive": positive_verdict,
        "negative": negative_verdict,
        "collapse_confirmed": positive_verdict["collapsed"],
        "resilience_confirmed": negative_verdict["recovered"],
    }
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_csv(out / "collapse_positive.csv", TIMESERIES_COLUMNS, rows)
        write_csv(out / "collapse_negative.csv", TIMESERIES_COLUMNS, neg_rows)
        with open(out / "collapse_verdict.json", "w", encoding="utf-8") as fh:
            json.dump(verdict, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return verdict


HETERO_PARAMS = UtilityParams(c_a=1.0, kappa=0.25, lam=0.5)


def run_heterogeneity_demo(
    costs=(0.9, 1.0, 1.1),
    params: UtilityParams | None = None,
    theta_step: float = 1e-4,
    out_path: str | Path | None = None,
) -> dict:
    """First-foraging order under heterogeneous costs on a rising urgency ramp.

    With no foragers out (the ramp starts from a full colony), robot i first
    finds foraging attractive at the urgency where its marginal utility
    crosses zero; cheaper robots cross first, and the crossings shift by
    exactly the cost difference.
    """
    params = params or HETERO_PARAMS
    world = WorldConfig()
    grid = np.arange(0.0, 1.0 + theta_step / 2, theta_step)
    report = []
    for i, c in enumerate(costs):
        analytic = c - params.kappa - params.lam * math.exp(-1.0)
        pi = np.array([marginal_utility(0.0, th, params, cost=c) for th in grid])
        positive = np.nonzero(pi > 0)[0]
        crossing = float(grid[positive[0]]) if len(positive) else math.inf
        # Time at which a trickle-only drain from a full colony reaches the
        # crossing urgency (deposits disabled on the ramp).
        t_cross = crossing * world.capacity / world.trickle_rate if math.isfinite(crossing) else math.inf
        report.append(
            {
                "robot": i,
                "cost": float(c),
                "crossing_theta": crossing,
                "analytic_crossing_theta": analytic,
                "first_forage_time": t_cross,
            }
        )
    by_cost = sorted(report, key=lambda r: r["cost"])
    ordering_ok = all(
        a["crossing_theta"] <= b["crossing_theta"] for a, b in zip(by_cost, by_cost[1:])
    )
    out = {"robots": report, "ordering_ok": ordering_ok}
    if out_path is not None:
        with open(out_path, "w", encoding="utf-8") as fh:
            json.dump(out, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return out
