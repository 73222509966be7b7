"""Global-game task allocation for a foraging robot colony."""

from .mechanism import (
    EquilibriumResult,
    Feedback,
    MechanismWarning,
    Regime,
    Theta,
    UtilityParams,
    dominance_bounds,
    equilibrium_foragers,
    finite_threshold,
    forage_probability,
    marginal_utility,
    positive_feedback_bounds,
    utility,
)
from .policy import (
    DecisionContext,
    InvalidTransition,
    ModeKind,
    RobotMode,
    decide_idle,
    on_deposit,
    on_pickup,
)
from .runner import (
    ScenarioConfig,
    ScenarioResult,
    run_collapse_demo,
    run_heterogeneity_demo,
    run_replicates,
    run_scenario,
    sweep_equilibrium,
)
from .safety import SafetyConfig, filter_all, filter_velocity
from .service import CommandError, LiveServer, serve
from .world import (
    Colony,
    EnergySource,
    Event,
    Robot,
    ScriptEvent,
    SimState,
    WorldConfig,
    desired_velocity,
    memory_update,
    recruit,
    release,
    signal,
    spawn_source,
    step,
)

__all__ = [
    "Colony",
    "CommandError",
    "DecisionContext",
    "LiveServer",
    "EnergySource",
    "EquilibriumResult",
    "Event",
    "Feedback",
    "InvalidTransition",
    "MechanismWarning",
    "ModeKind",
    "Regime",
    "Robot",
    "RobotMode",
    "SafetyConfig",
    "ScenarioConfig",
    "ScenarioResult",
    "ScriptEvent",
    "SimState",
    "Theta",
    "UtilityParams",
    "WorldConfig",
    "decide_idle",
    "desired_velocity",
    "dominance_bounds",
    "equilibrium_foragers",
    "filter_all",
    "filter_velocity",
    "finite_threshold",
    "forage_probability",
    "marginal_utility",
    "memory_update",
    "on_deposit",
    "on_pickup",
    "positive_feedback_bounds",
    "recruit",
    "release",
    "run_collapse_demo",
    "run_heterogeneity_demo",
    "run_replicates",
    "run_scenario",
    "serve",
    "signal",
    "spawn_source",
    "step",
    "sweep_equilibrium",
    "utility",
]
