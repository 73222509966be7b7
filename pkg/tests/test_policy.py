"""Switching behaviour: transition guards, hysteresis, sampling statistics."""
import math

import numpy as np
import pytest

from colonygame import (
    DecisionContext,
    InvalidTransition,
    ModeKind,
    RobotMode,
    UtilityParams,
    decide_idle,
    forage_probability,
    on_deposit,
    on_pickup,
)
from colonygame.policy import IDLE, SEARCHING

PAPER = UtilityParams()


def test_mode_invariant():
    with pytest.raises(ValueError):
        RobotMode(ModeKind.IDLE, carried_source=1)
    with pytest.raises(ValueError):
        RobotMode(ModeKind.FORAGING_RETURN)
    assert RobotMode(ModeKind.FORAGING_RETURN, carried_source=3).foraging


def test_context_invariant():
    with pytest.raises(ValueError):
        DecisionContext(theta=0.5, n_star=5, n_active=4)


class TestDecideIdle:
    def test_nonpositive_margin_stays_idle(self):
        # With a small gain, theta = 0.1 is idle-dominant.
        params = UtilityParams(c_a=1.0, kappa=0.25, lam=0.5)
        rng = np.random.default_rng(0)
        ctx = DecisionContext(theta=0.1, n_star=0, n_active=12)
        assert all(decide_idle(ctx, params, rng) is IDLE for _ in range(200))

    def test_dominant_regime_always_forages(self):
        rng = np.random.default_rng(0)
        ctx = DecisionContext(theta=0.9, n_star=0, n_active=12)
        assert all(decide_idle(ctx, PAPER, rng) is SEARCHING for _ in range(200))

    def test_never_returns_carrying_mode(self):
        rng = np.random.default_rng(1)
        ctx = DecisionContext(theta=0.5, n_star=1, n_active=12)
        for _ in range(500):
            mode = decide_idle(ctx, PAPER, rng)
            assert mode.kind is not ModeKind.FORAGING_RETURN

    def test_empirical_frequency_matches_probability(self):
        ctx = DecisionContext(theta=0.5, n_star=1, n_active=12)
        p = forage_probability(0.5, 1, 12, PAPER)
        assert p == pytest.approx((math.log(22.0) - 2.0) / 11.0, abs=1e-12)
        rng = np.random.default_rng(42)
        trials = 100_000
        hits = sum(decide_idle(ctx, PAPER, rng).foraging for _ in range(trials))
        sigma = math.sqrt(p * (1.0 - p) / trials)
        assert abs(hits / trials - p) < 3.0 * sigma


class TestTransitions:
    def test_pickup(self):
        mode = on_pickup(SEARCHING, 3)
        assert mode == RobotMode(ModeKind.FORAGING_RETURN, carried_source=3)

    def test_pickup_guards(self):
        with pytest.raises(InvalidTransition):
            on_pickup(IDLE, 1)
        with pytest.raises(InvalidTransition):
            on_pickup(RobotMode(ModeKind.FORAGING_RETURN, carried_source=2), 3)

    def test_deposit(self):
        assert on_deposit(RobotMode(ModeKind.FORAGING_RETURN, carried_source=3)) is IDLE

    def test_deposit_guards(self):
        with pytest.raises(InvalidTransition):
            on_deposit(SEARCHING)
        with pytest.raises(InvalidTransition):
            on_deposit(IDLE)
