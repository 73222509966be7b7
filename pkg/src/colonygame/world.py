"""Discrete-time foraging world: colony energy, sources, robots, stepping.

State lives in flat numpy arrays keyed by robot index so a tick costs a
handful of vectorised operations; `Robot` / `EnergySource` dataclasses are
inspection views.  All randomness flows through named streams derived from
the scenario seed: one stream per robot (decisions, random walk, memory
noise) plus a source-placement stream and a scenario stream (recruitment
picks, release placement).  Removing a robot therefore never perturbs the
draws of the survivors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .mechanism import Theta, UtilityParams, forage_probability
from .policy import (
    IDLE,
    DecisionContext,
    ModeKind,
    RobotMode,
    decide_idle,
    on_deposit,
    on_pickup,
)
from .safety import SafetyConfig, filter_all

MODE_IDLE, MODE_SEARCH, MODE_RETURN = 0, 1, 2
_MODE_KINDS = {
    MODE_IDLE: ModeKind.IDLE,
    MODE_SEARCH: ModeKind.FORAGING_SEARCH,
    MODE_RETURN: ModeKind.FORAGING_RETURN,
}
_MOVE_EPS = 1e-9

SELECTIONS = ("random", "idle_first", "foragers_first")


@dataclass(frozen=True)
class WorldConfig:
    domain_radius: float = 30.0
    colony_radius: float = 3.0
    n_robots: int = 12
    n_sources: int = 6
    sensing_horizon: float = 5.0
    trickle_rate: float = 0.1
    move_rate: float = 0.01
    source_value: float = 5.0
    capacity: float = 100.0
    initial_energy: float = 50.0
    v_max: float = 1.0
    dt: float = 0.1
    memory_noise_scale: float = 0.05
    pickup_radius: float = 0.5
    source_annulus: tuple[float, float] = (6.0, 27.0)

    def __post_init__(self) -> None:
        r_min, r_max = self.source_annulus
        if self.dt <= 0:
            raise ValueError(f"dt must be > 0, got {self.dt}")
        if min(self.domain_radius, self.colony_radius, r_min) <= 0:
            raise ValueError("all radii must be positive")
        if not self.colony_radius < r_min < r_max < self.domain_radius:
            raise ValueError(
                f"need colony_radius < r_min < r_max < domain_radius, got {self}"
            )
        if self.n_robots < 1 or self.n_sources < 1:
            raise ValueError("need at least one robot and one source")
        if self.v_max <= 0 or self.capacity <= 0:
            raise ValueError("v_max and capacity must be positive")


@dataclass
class Colony:
    energy: float
    capacity: float

    def add(self, amount: float) -> None:
        self.energy = min(self.capacity, max(0.0, self.energy + amount))


@dataclass(frozen=True)
class EnergySource:
    id: int
    position: np.ndarray
    slice_index: int


@dataclass(frozen=True)
class Robot:
    """Read-only view of one robot's slice of the state arrays."""

    id: int
    position: np.ndarray
    mode: RobotMode
    memory: np.ndarray | None
    consumed: float
    cost: float
    active: bool


@dataclass(frozen=True)
class ScriptEvent:
    time: float
    action: str  # "recruit" or "release"
    k: int
    selection: str = "random"

    def __post_init__(self) -> None:
        if self.action not in ("recruit", "release"):
            raise ValueError(f"unknown scripted action {self.action!r}")
        if self.selection not in SELECTIONS:
            raise ValueError(f"unknown selection {self.selection!r}")
        if self.k < 0:
            raise ValueError("k must be >= 0")


@dataclass(frozen=True)
class Event:
    tick: int
    time: float
    kind: str
    robot: int
    x: float
    y: float
    theta: float
    n_star: int
    value: float = 0.0


class SimState:
    def __init__(
        self,
        config: WorldConfig | None = None,
        params: UtilityParams | None = None,
        safety: SafetyConfig | None = None,
        seed: int = 0,
        costs: "list[float] | None" = None,
        event_script: "tuple[ScriptEvent, ...] | list[ScriptEvent]" = (),
    ) -> None:
        cfg = config or WorldConfig()
        self.config = cfg
        self.params = params or UtilityParams()
        self.safety = safety or SafetyConfig(v_max=cfg.v_max, keep_in_radius=cfg.domain_radius)
        self.seed = seed
        self.tick = 0
        self.colony = Colony(energy=cfg.initial_energy, capacity=cfg.capacity)

        script = sorted(event_script, key=lambda e: e.time)
        if list(event_script) != script:
            raise ValueError("event script must be time-ordered")
        self.script: tuple[ScriptEvent, ...] = tuple(script)
        self._script_idx = 0

        n = cfg.n_robots
        self.robot_rng = [
            np.random.default_rng(np.random.SeedSequence([seed, 1, i])) for i in range(n)
        ]
        self.source_rng = np.random.default_rng(np.random.SeedSequence([seed, 2]))
        self.scenario_rng = np.random.default_rng(np.random.SeedSequence([seed, 3]))

        self.pos = np.zeros((n, 2))
        min_sep = 2.0 * self.safety.collision_radius + 0.1
        for i in range(n):
            rng = self.robot_rng[i]
            for _ in range(256):
                r = cfg.colony_radius * 0.9 * math.sqrt(rng.random())
                ang = 2.0 * math.pi * rng.random()
                cand = np.array([r * math.cos(ang), r * math.sin(ang)])
                if i == 0 or (
                    np.einsum("ij,ij->i", self.pos[:i] - cand, self.pos[:i] - cand).min()
                    >= min_sep**2
                ):
                    break
            self.pos[i] = cand
        self.mode = np.full(n, MODE_IDLE, dtype=np.int8)
        self.carried = np.full(n, -1, dtype=np.int64)
        self.carried_from = np.zeros((n, 2))
        self.memory = np.zeros((n, 2))
        self.memory_valid = np.zeros(n, dtype=bool)
        self.consumed = np.zeros(n)
        self.active = np.ones(n, dtype=bool)
        if costs is None:
            self.cost = np.full(n, self.params.c_a)
        else:
            if len(costs) != n:
                raise ValueError(f"need {n} costs, got {len(costs)}")
            self.cost = np.asarray(costs, dtype=float)

        self._next_source_id = 0
        self.source_pos = np.zeros((cfg.n_sources, 2))
        self.source_id = np.zeros(cfg.n_sources, dtype=np.int64)
        self.source_slice = np.arange(cfg.n_sources) % cfg.n_sources
        for slot in range(cfg.n_sources):
            self._respawn_slot(slot)

        self.event_log: list[Event] = []
        self._depleted = False
        self.min_pairwise = math.inf
        self.max_radius = 0.0
        self._last_speed = np.zeros(n)

    # -- views -------------------------------------------------------------

    @property
    def clock(self) -> float:
        return self.tick * self.config.dt

    @property
    def n_active(self) -> int:
        return int(self.active.sum())

    @property
    def n_foragers(self) -> int:
        return int((self.active & (self.mode != MODE_IDLE)).sum())

    def robot(self, i: int) -> Robot:
        code = int(self.mode[i])
        carried = int(self.carried[i]) if code == MODE_RETURN else None
        return Robot(
            id=i,
            position=self.pos[i].copy(),
            mode=RobotMode(_MODE_KINDS[code], carried_source=carried),
            memory=self.memory[i].copy() if self.memory_valid[i] else None,
            consumed=float(self.consumed[i]),
            cost=float(self.cost[i]),
            active=bool(self.active[i]),
        )

    @property
    def robots(self) -> list[Robot]:
        return [self.robot(i) for i in range(self.config.n_robots)]

    @property
    def sources(self) -> list[EnergySource]:
        return [
            EnergySource(int(self.source_id[s]), self.source_pos[s].copy(), int(self.source_slice[s]))
            for s in range(self.config.n_sources)
        ]

    # -- internals ---------------------------------------------------------

    def _respawn_slot(self, slot: int) -> None:
        src = spawn_source(int(self.source_slice[slot]), self.config, self.source_rng,
                           source_id=self._next_source_id)
        self._next_source_id += 1
        self.source_pos[slot] = src.position
        self.source_id[slot] = src.id

    def _log(self, kind: str, robot: int, theta: float, n_star: int, value: float = 0.0) -> None:
        x, y = (self.pos[robot] if robot >= 0 else (0.0, 0.0))
        self.event_log.append(
            Event(self.tick, self.clock, kind, robot, float(x), float(y), theta, n_star, value)
        )


def signal(state: SimState) -> tuple[float, Theta]:
    """Colony energy fraction and its complement, the task urgency."""
    s = min(1.0, max(0.0, state.colony.energy / state.config.capacity))
    return s, Theta(1.0 - s)


def spawn_source(
    slice_index: int,
    config: WorldConfig,
    rng: np.random.Generator,
    source_id: int = 0,
) -> EnergySource:
    """Place a fresh source at a uniform angle within its slice of the annulus."""
    n = config.n_sources
    if not 0 <= slice_index < n:
        raise ValueError(f"slice index must be in [0, {n}), got {slice_index}")
    width = 2.0 * math.pi / n
    ang = (slice_index + rng.random()) * width
    r_min, r_max = config.source_annulus
    r = r_min + rng.random() * (r_max - r_min)
    return EnergySource(
        id=source_id,
        position=np.array([r * math.cos(ang), r * math.sin(ang)]),
        slice_index=slice_index,
    )


def _fresh_waypoint(state: SimState, i: int) -> None:
    """Random-walk step: a point at sensing-horizon distance, kept in-domain."""
    cfg = state.config
    rng = state.robot_rng[i]
    limit = 0.95 * cfg.domain_radius
    for _ in range(64):
        ang = 2.0 * math.pi * rng.random()
        wp = state.pos[i] + cfg.sensing_horizon * np.array([math.cos(ang), math.sin(ang)])
        if wp @ wp <= limit * limit:
            break
    state.memory[i] = wp
    state.memory_valid[i] = True


def desired_velocity(state: SimState, i: int) -> np.ndarray:
    """Unfiltered velocity command for robot i under its current mode."""
    cfg = state.config
    code = state.mode[i]
    if code == MODE_IDLE or not state.active[i]:
        return np.zeros(2)
    if code == MODE_RETURN:
        target = -state.pos[i]
    else:
        diff = state.source_pos - state.pos[i]
        d2 = np.einsum("ij,ij->i", diff, diff)
        nearest = int(np.argmin(d2))
        if d2[nearest] <= cfg.sensing_horizon**2:
            target = diff[nearest]
        else:
            if state.memory_valid[i]:
                to_mem = state.memory[i] - state.pos[i]
                if to_mem @ to_mem <= (cfg.v_max * cfg.dt) ** 2:
                    _fresh_waypoint(state, i)
            else:
                _fresh_waypoint(state, i)
            target = state.memory[i] - state.pos[i]
    dist = math.sqrt(float(target @ target))
    if dist < _MOVE_EPS:
        return np.zeros(2)
    return target * (cfg.v_max / dist)


def memory_update(
    robot: Robot,
    deposited_source_position: np.ndarray,
    will_continue: bool,
    rng: np.random.Generator,
    noise_scale: float = 0.05,
) -> Robot:
    """Memory handling at deposit time.

    A robot that goes idle forgets; one that keeps foraging remembers the
    source location disturbed by zero-mean Gaussian noise whose per-axis
    standard deviation scales with the colony-to-source distance (odometry
    drift surrogate).
    """
    if not will_continue:
        return Robot(robot.id, robot.position, robot.mode, None,
                     robot.consumed, robot.cost, robot.active)
    src = np.asarray(deposited_source_position, dtype=float)
    sigma = noise_scale * math.sqrt(float(src @ src))
    mem = src + rng.normal(0.0, sigma, size=2)
    return Robot(robot.id, robot.position, robot.mode, mem,
                 robot.consumed, robot.cost, robot.active)


def _noisy_memory(state: SimState, i: int, source_pos: np.ndarray) -> np.ndarray:
    sigma = state.config.memory_noise_scale * math.sqrt(float(source_pos @ source_pos))
    return source_pos + state.robot_rng[i].normal(0.0, sigma, size=2)


def recruit(
    state: SimState,
    k: int,
    selection: str = "random",
    rng: np.random.Generator | None = None,
) -> SimState:
    """Remove k robots from the active population (human recruitment)."""
    if selection not in SELECTIONS:
        raise ValueError(f"unknown selection {selection!r}")
    active_ids = np.nonzero(state.active)[0]
    if k > len(active_ids):
        raise ValueError(f"cannot recruit {k} of {len(active_ids)} active robots")
    if k == 0:
        return state
    rng = rng if rng is not None else state.scenario_rng
    if selection == "random":
        picked = np.sort(rng.choice(active_ids, size=k, replace=False))
    else:
        foraging = state.mode[active_ids] != MODE_IDLE
        if selection == "idle_first":
            order = np.concatenate([active_ids[~foraging], active_ids[foraging]])
        else:
            order = np.concatenate([active_ids[foraging], active_ids[~foraging]])
        picked = np.sort(order[:k])
    _, theta = signal(state)
    n_star = state.n_foragers
    for i in picked:
        if state.mode[i] == MODE_RETURN:
            # The world slot already respawned at pickup, so the carried
            # source simply leaves with the robot; the count stays fixed.
            state.carried[i] = -1
        state.active[i] = False
        state.mode[i] = MODE_IDLE
        state.memory_valid[i] = False
        state._log("recruit", int(i), theta.value, n_star)
    return state


def release(state: SimState, k: int) -> SimState:
    """Return k recruited robots to the colony, idle with a clean slate."""
    inactive_ids = np.nonzero(~state.active)[0]
    if len(inactive_ids) == 0 and k > 0:
        raise ValueError("no inactive robots available to release")
    if k > len(inactive_ids):
        raise ValueError(f"cannot release {k} of {len(inactive_ids)} inactive robots")
    _, theta = signal(state)
    n_star = state.n_foragers
    for i in inactive_ids[:k]:
        ang = 2.0 * math.pi * state.scenario_rng.random()
        r = 0.95 * state.config.colony_radius
        state.pos[i] = (r * math.cos(ang), r * math.sin(ang))
        state.active[i] = True
        state.mode[i] = MODE_IDLE
        state.memory_valid[i] = False
        state.consumed[i] = 0.0
        state._log("release", int(i), theta.value, n_star)
    return state


def step(state: SimState) -> SimState:
    """Advance the world one tick; mutates and returns state."""
    cfg = state.config
    dt = cfg.dt
    t = state.clock

    # (1) scripted events
    while state._script_idx < len(state.script) and state.script[state._script_idx].time <= t + 1e-9:
        ev = state.script[state._script_idx]
        state._script_idx += 1
        if ev.action == "recruit":
            recruit(state, ev.k, ev.selection)
        else:
            release(state, ev.k)

    # (2) shared decision context
    s, theta = signal(state)
    th = theta.value
    n_active = state.n_active
    n_star = state.n_foragers

    # (3) idle robots sample the mixed strategy against the tick-start context
    if n_active > 0:
        ctx = DecisionContext(th, n_star, n_active)
        idle_ids = np.nonzero(state.active & (state.mode == MODE_IDLE))[0]
        for i in idle_ids:
            mode = decide_idle(ctx, state.params, state.robot_rng[i], cost=float(state.cost[i]))
            if mode.foraging:
                state.mode[i] = MODE_SEARCH
                state._log("decide", int(i), th, n_star)

    # (4) desired velocities
    active_ids = np.nonzero(state.active)[0]
    n_all = cfg.n_robots
    V = np.zeros((n_all, 2))
    for i in active_ids:
        if state.mode[i] != MODE_IDLE:
            V[i] = desired_velocity(state, int(i))

    # (5) safety filter over active robots only
    if len(active_ids):
        filtered, faults = filter_all(state.pos[active_ids], V[active_ids], state.safety)
        V[active_ids] = filtered
        for j in faults:
            state._log("fault", int(active_ids[j]), th, n_star)

    # (6) integrate positions
    state.pos[active_ids] += V[active_ids] * dt

    # running safety statistics
    if len(active_ids):
        p = state.pos[active_ids]
        if len(active_ids) > 1:
            diff = p[:, None, :] - p[None, :, :]
            d2 = np.einsum("ijk,ijk->ij", diff, diff)
            np.fill_diagonal(d2, np.inf)
            state.min_pairwise = min(state.min_pairwise, math.sqrt(float(d2.min())))
        state.max_radius = max(
            state.max_radius,
            math.sqrt(float(np.einsum("ij,ij->i", p, p).max())),
        )

    # (7) energy accounting
    state.colony.add(-cfg.trickle_rate * dt)
    speeds = np.einsum("ij,ij->i", V, V)
    moving = state.active & (speeds > _MOVE_EPS**2)
    state.consumed[moving] += cfg.move_rate * dt

    # (8) pickups (robot-id order; first robot wins a contested source)
    searchers = np.nonzero(state.active & (state.mode == MODE_SEARCH))[0]
    for i in searchers:
        diff = state.source_pos - state.pos[i]
        d2 = np.einsum("ij,ij->i", diff, diff)
        slot = int(np.argmin(d2))
        if d2[slot] <= cfg.pickup_radius**2:
            sid = int(state.source_id[slot])
            src_pos = state.source_pos[slot].copy()
            new_mode = on_pickup(RobotMode(_MODE_KINDS[MODE_SEARCH]), sid)
            state.mode[i] = MODE_RETURN
            state.carried[i] = new_mode.carried_source
            state.carried_from[i] = src_pos
            state._respawn_slot(slot)
            state._log("pickup", int(i), th, n_star, value=float(sid))

    # (9) deposits
    returners = np.nonzero(state.active & (state.mode == MODE_RETURN))[0]
    for i in returners:
        if state.pos[i] @ state.pos[i] > cfg.colony_radius**2:
            continue
        recharge = cfg.source_value - float(state.consumed[i])
        state.colony.add(recharge)
        state.consumed[i] = 0.0
        on_deposit(RobotMode(_MODE_KINDS[MODE_RETURN], carried_source=int(state.carried[i])))
        state.mode[i] = MODE_IDLE
        src_pos = state.carried_from[i].copy()
        state.carried[i] = -1
        s2, theta2 = signal(state)
        n_star2 = state.n_foragers
        state._log("deposit", int(i), theta2.value, n_star2, value=recharge)
        # Immediate re-decision: keep foraging (with a noisy memory of the
        # source) or stay idle with memory cleared.
        ctx2 = DecisionContext(theta2.value, n_star2, state.n_active)
        mode = decide_idle(ctx2, state.params, state.robot_rng[i], cost=float(state.cost[i]))
        if mode.foraging:
            state.mode[i] = MODE_SEARCH
            state.memory[i] = _noisy_memory(state, int(i), src_pos)
            state.memory_valid[i] = True
            state._log("decide", int(i), theta2.value, n_star2)
        else:
            state.memory_valid[i] = False

    # (10) depletion bookkeeping and clock
    if state.colony.energy <= 0.0 and not state._depleted:
        state._depleted = True
        state._log("depletion", -1, th, n_star)
    elif state.colony.energy > 0.0:
        state._depleted = False
    state.tick += 1
    return state
