"""Per-robot switching behaviour with action hysteresis.

Idle robots re-sample the mixed strategy every tick; a robot that starts
foraging cannot go idle again until it has deposited an energy source at the
colony.  Transitions are pure functions so the world stepper stays the only
owner of robot state.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .mechanism import Theta, UtilityParams, forage_probability


class ModeKind(enum.Enum):
    IDLE = "idle"
    FORAGING_SEARCH = "foraging_search"
    FORAGING_RETURN = "foraging_return"


class InvalidTransition(Exception):
    pass


@dataclass(frozen=True)
class RobotMode:
    kind: ModeKind
    carried_source: int | None = None

    def __post_init__(self) -> None:
        carrying = self.carried_source is not None
        if carrying != (self.kind is ModeKind.FORAGING_RETURN):
            raise ValueError(
                f"carried_source is only valid in FORAGING_RETURN, got {self}"
            )

    @property
    def foraging(self) -> bool:
        return self.kind is not ModeKind.IDLE


IDLE = RobotMode(ModeKind.IDLE)
SEARCHING = RobotMode(ModeKind.FORAGING_SEARCH)


@dataclass(frozen=True)
class DecisionContext:
    """Tick-start quantities shared by every idle robot's decision."""

    theta: Theta | float
    n_star: int
    n_active: int

    def __post_init__(self) -> None:
        if not 0 <= self.n_star <= self.n_active:
            raise ValueError(
                f"need 0 <= n_star <= n_active, got {self.n_star}, {self.n_active}"
            )


def decide_idle(
    ctx: DecisionContext,
    params: UtilityParams,
    rng: np.random.Generator,
    cost: float | None = None,
) -> RobotMode:
    """One Bernoulli draw of the mixed strategy for an idle robot."""
    p = forage_probability(ctx.theta, ctx.n_star, ctx.n_active, params, cost=cost)
    if p >= 1.0:
        return SEARCHING
    if p <= 0.0:
        return IDLE
    return SEARCHING if rng.random() < p else IDLE


def on_pickup(mode: RobotMode, source_id: int) -> RobotMode:
    if mode.kind is not ModeKind.FORAGING_SEARCH:
        raise InvalidTransition(f"pickup requires FORAGING_SEARCH, got {mode}")
    return RobotMode(ModeKind.FORAGING_RETURN, carried_source=source_id)


def on_deposit(mode: RobotMode) -> RobotMode:
    """The only way back to IDLE; enforces the hysteresis contract."""
    if mode.kind is not ModeKind.FORAGING_RETURN:
        raise InvalidTransition(f"deposit requires FORAGING_RETURN, got {mode}")
    return IDLE
