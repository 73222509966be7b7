"""World stepping: kinematics, energy accounting, events, determinism."""
import math

import numpy as np
import pytest
from scipy import stats

from colonygame import (
    Feedback,
    ScriptEvent,
    SimState,
    UtilityParams,
    WorldConfig,
    desired_velocity,
    marginal_utility,
    memory_update,
    recruit,
    release,
    signal,
    spawn_source,
    step,
)
from colonygame.world import MODE_IDLE, MODE_RETURN, MODE_SEARCH

NO_FORAGE = UtilityParams(c_a=2.0, kappa=0.25, lam=0.0, feedback=Feedback.NONE)


def run_ticks(state, n):
    for _ in range(n):
        step(state)
    return state


class TestSignal:
    def test_midpoint(self):
        state = SimState(seed=0)
        s, theta = signal(state)
        assert s == 0.5 and theta.value == 0.5

    def test_boundaries(self):
        state = SimState(seed=0)
        state.colony.energy = 0.0
        assert signal(state)[1].value == 1.0
        state.colony.energy = state.config.capacity
        assert signal(state)[1].value == 0.0


class TestSpawnSource:
    def test_slice_angle_range(self):
        cfg = WorldConfig()
        rng = np.random.default_rng(0)
        width = 2 * math.pi / cfg.n_sources
        for slice_index in range(cfg.n_sources):
            for _ in range(200):
                src = spawn_source(slice_index, cfg, rng)
                ang = math.atan2(src.position[1], src.position[0]) % (2 * math.pi)
                assert slice_index * width <= ang < (slice_index + 1) * width + 1e-12

    def test_radii_within_annulus(self):
        cfg = WorldConfig()
        rng = np.random.default_rng(1)
        radii = [
            np.linalg.norm(spawn_source(i % cfg.n_sources, cfg, rng).position)
            for i in range(10_000)
        ]
        assert min(radii) >= cfg.source_annulus[0]
        assert max(radii) <= cfg.source_annulus[1]

    def test_angle_uniform_chi_square(self):
        cfg = WorldConfig()
        rng = np.random.default_rng(2)
        width = 2 * math.pi / cfg.n_sources
        for slice_index in (0, 3):
            angs = []
            for _ in range(10_000):
                src = spawn_source(slice_index, cfg, rng)
                ang = math.atan2(src.position[1], src.position[0]) % (2 * math.pi)
                angs.append((ang - slice_index * width) / width)
            counts, _ = np.histogram(angs, bins=20, range=(0.0, 1.0))
            assert stats.chisquare(counts).pvalue > 0.01

    def test_bad_slice_rejected(self):
        with pytest.raises(ValueError):
            spawn_source(6, WorldConfig(), np.random.default_rng(0))


class TestDesiredVelocity:
    def test_idle_is_stationary(self):
        state = SimState(seed=3)
        assert desired_velocity(state, 0) == pytest.approx(np.zeros(2))

    def test_search_heads_at_sensed_source(self):
        state = SimState(seed=3)
        state.mode[0] = MODE_SEARCH
        state.pos[0] = state.source_pos[0] - np.array([4.0, 0.0])
        v = desired_velocity(state, 0)
        assert v == pytest.approx([state.config.v_max, 0.0], abs=1e-9)

    def test_return_heads_home_at_speed_limit(self):
        state = SimState(seed=3)
        state.mode[0] = MODE_RETURN
        state.carried[0] = 99
        state.pos[0] = np.array([10.0, 0.0])
        v = desired_velocity(state, 0)
        assert v == pytest.approx([-state.config.v_max, 0.0], abs=1e-9)

    def test_fresh_waypoint_at_sensing_distance(self):
        state = SimState(seed=3)
        state.mode[0] = MODE_SEARCH
        state.pos[0] = np.array([15.0, 15.0])  # no source nearby for seed 3
        assert not state.memory_valid[0]
        v = desired_velocity(state, 0)
        assert state.memory_valid[0]
        dist = np.linalg.norm(state.memory[0] - state.pos[0])
        assert dist == pytest.approx(state.config.sensing_horizon, abs=1e-9)
        assert np.linalg.norm(v) == pytest.approx(state.config.v_max, abs=1e-9)


class TestStep:
    def test_zero_dt_rejected(self):
        with pytest.raises(ValueError):
            WorldConfig(dt=0.0)

    def test_trickle_only_depletion(self):
        cfg = WorldConfig(initial_energy=5.0)
        state = SimState(config=cfg, params=NO_FORAGE, seed=0)
        run_ticks(state, 600)
        depletions = [e for e in state.event_log if e.kind == "depletion"]
        assert len(depletions) == 1
        assert depletions[0].time == pytest.approx(5.0 / cfg.trickle_rate, abs=cfg.dt)
        assert state.colony.energy == 0.0

    def test_deposit_credits_source_minus_consumption(self):
        state = SimState(params=NO_FORAGE, seed=5)
        state.active[1:] = False  # isolate robot 0 so no avoidance nudge moves it
        state.mode[0] = MODE_RETURN
        state.carried[0] = 123
        state.carried_from[0] = np.array([10.0, 0.0])
        state.consumed[0] = 0.4
        state.pos[0] = np.zeros(2)
        before = state.colony.energy
        step(state)
        deposit = [e for e in state.event_log if e.kind == "deposit"][0]
        assert deposit.value == pytest.approx(5.0 - 0.4, abs=1e-12)
        trickle = state.config.trickle_rate * state.config.dt
        assert state.colony.energy == pytest.approx(before - trickle + 4.6, abs=1e-9)
        assert state.consumed[0] == 0.0
        assert state.mode[0] == MODE_IDLE
        assert not state.memory_valid[0]

    def test_source_count_constant(self):
        state = SimState(seed=8)
        for _ in range(600):
            step(state)
            assert len(state.sources) == state.config.n_sources

    def test_robots_stay_in_domain(self):
        state = SimState(seed=8)
        run_ticks(state, 2000)
        assert state.max_radius <= state.config.domain_radius + 1e-6


class TestMemory:
    def test_idle_clears(self):
        state = SimState(seed=0)
        robot = state.robot(0)
        updated = memory_update(robot, np.array([10.0, 0.0]), will_continue=False,
                                rng=np.random.default_rng(0))
        assert updated.memory is None

    def test_zero_noise_is_exact(self):
        state = SimState(seed=0)
        robot = state.robot(0)
        updated = memory_update(robot, np.array([10.0, 5.0]), will_continue=True,
                                rng=np.random.default_rng(0), noise_scale=0.0)
        assert updated.memory == pytest.approx([10.0, 5.0], abs=1e-12)

    def test_noise_sigma_scales_with_distance(self):
        rng = np.random.default_rng(1)
        src = np.array([20.0, 0.0])
        robot = SimState(seed=0).robot(0)
        samples = np.array(
            [memory_update(robot, src, True, rng, noise_scale=0.05).memory for _ in range(10_000)]
        )
        sigma = (samples - src).std(axis=0)
        assert 0.9 < sigma[0] < 1.1
        assert 0.9 < sigma[1] < 1.1


class TestRecruitRelease:
    def test_recruit_reduces_active(self):
        state = SimState(seed=0)
        recruit(state, 6, "random")
        assert state.n_active == 6
        assert sum(1 for e in state.event_log if e.kind == "recruit") == 6

    def test_recruit_zero_is_identity(self):
        state = SimState(seed=0)
        before = state.active.copy()
        recruit(state, 0, "random")
        assert (state.active == before).all()

    def test_recruit_too_many_rejected(self):
        state = SimState(seed=0)
        with pytest.raises(ValueError):
            recruit(state, 13, "random")

    def test_removing_forager_raises_margin(self):
        params = UtilityParams()
        for n_star in range(1, 12):
            assert marginal_utility(n_star - 1, 0.5, params) > marginal_utility(
                n_star, 0.5, params
            )

    def test_release_restores_population_at_colony(self):
        state = SimState(seed=0)
        recruit(state, 6, "random")
        release(state, 6)
        assert state.n_active == 12
        released = [e.robot for e in state.event_log if e.kind == "release"]
        for i in released:
            assert np.linalg.norm(state.pos[i]) <= state.config.colony_radius
            assert state.mode[i] == MODE_IDLE
            assert state.consumed[i] == 0.0

    def test_release_without_inactive_rejected(self):
        state = SimState(seed=0)
        with pytest.raises(ValueError):
            release(state, 1)

    def test_foragers_first_selection(self):
        state = SimState(seed=0)
        state.mode[[2, 5, 7]] = MODE_SEARCH
        recruit(state, 3, "foragers_first")
        assert not state.active[[2, 5, 7]].any()


class TestTraceInvariants:
    def reconstruct(self, state):
        """Replay the event log as per-robot mode machines; raises on an
        illegal transition, in particular any foraging -> idle without a
        deposit."""
        mode = {i: "idle" for i in range(state.config.n_robots)}
        for e in state.event_log:
            if e.kind == "decide":
                assert mode[e.robot] == "idle", e
                mode[e.robot] = "search"
            elif e.kind == "pickup":
                assert mode[e.robot] == "search", e
                mode[e.robot] = "return"
            elif e.kind == "deposit":
                assert mode[e.robot] == "return", e
                mode[e.robot] = "idle"
            elif e.kind in ("recruit", "release"):
                mode[e.robot] = "idle"
        return mode

    def test_hysteresis_over_full_runs(self):
        for seed in range(5):
            state = SimState(seed=seed)
            run_ticks(state, 3000)
            self.reconstruct(state)

    def test_energy_ledger(self):
        state = SimState(seed=1)
        start = state.colony.energy
        run_ticks(state, 3000)
        recharges = sum(e.value for e in state.event_log if e.kind == "deposit")
        expected = start + recharges - state.config.trickle_rate * state.clock
        assert state.colony.energy == pytest.approx(expected, abs=1e-6)


class TestDeterminism:
    def test_same_seed_same_log(self):
        script = (ScriptEvent(time=60.0, action="recruit", k=3, selection="random"),)
        logs = []
        for _ in range(2):
            state = SimState(seed=42, event_script=script)
            run_ticks(state, 1200)
            logs.append(state.event_log)
        assert logs[0] == logs[1]

    def test_different_seed_differs(self):
        a = run_ticks(SimState(seed=0), 500).event_log
        b = run_ticks(SimState(seed=1), 500).event_log
        assert a != b
