"""Utility mechanism and equilibrium analysis for the foraging game.

All functions here are pure and stateless; they operate on plain floats so
they can be called per-robot inside the simulation loop or vectorised by
callers.  The marginal utility is decreasing in the number of foragers
(negative feedback), which is what removes the all-or-nothing dominant
strategies and yields a mixed-strategy band of the urgency signal.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field


class Feedback(enum.Enum):
    NEGATIVE = "negative"
    POSITIVE = "positive"
    NONE = "none"


class Regime(enum.Enum):
    DOMINANT_FORAGE = "dominant_forage"
    DOMINANT_IDLE = "dominant_idle"
    MIXED = "mixed"


class MechanismWarning(UserWarning):
    """Utility parameters are outside the range the analysis was derived for."""


_warned: set[str] = set()


def _warn_once(msg: str) -> None:
    if msg not in _warned:
        _warned.add(msg)
        warnings.warn(msg, MechanismWarning, stacklevel=4)


@dataclass(frozen=True)
class UtilityParams:
    """Constants of the foraging utility.

    c_a is the per-robot cost of foraging, kappa a constant reward, and
    lam the gain of the crowding feedback term.  The default values are the
    ones used throughout the simulation experiments.
    """

    c_a: float = 1.0
    kappa: float = 0.25
    lam: float = 5.5
    feedback: Feedback = Feedback.NEGATIVE

    def __post_init__(self) -> None:
        if self.lam < 0:
            raise ValueError(f"feedback gain must be >= 0, got {self.lam}")
        if self.lam == 0 and self.feedback is not Feedback.NONE:
            raise ValueError("lam = 0 requires feedback = NONE")
        for msg in self.assumption_violations():
            _warn_once(msg)

    def assumption_violations(self) -> list[str]:
        """Report (not reject) parameter choices outside the analysed range.

        The gain bound lam <= e*(c_a - kappa) is violated by the default
        simulation parameters on purpose; the only consequence is that the
        mixed band extends below theta = 0.
        """
        out = []
        gap = self.c_a - self.kappa
        if gap > 1:
            out.append(
                f"c_a - kappa = {gap:g} > 1: forage dominance may be unreachable for theta <= 1"
            )
        if self.feedback is not Feedback.NONE and self.lam > math.e * gap:
            out.append(
                f"lam = {self.lam:g} exceeds e*(c_a - kappa) = {math.e * gap:g}: "
                "mixed band extends below theta = 0"
            )
        return out


@dataclass(frozen=True)
class Theta:
    """Task urgency, the complement of the colony energy fraction."""

    value: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", min(1.0, max(0.0, float(self.value))))

    @classmethod
    def from_signal(cls, s: float) -> "Theta":
        return cls(1.0 - min(1.0, max(0.0, float(s))))

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class EquilibriumResult:
    regime: Regime
    expected_n: float
    probability: float | None = None


def _theta_value(theta: "Theta | float") -> float:
    return theta.value if isinstance(theta, Theta) else float(theta)


def _crowding_term(n: float, params: UtilityParams) -> float:
    if params.feedback is Feedback.NEGATIVE:
        return params.lam * math.exp(-(n + 1.0))
    if params.feedback is Feedback.POSITIVE:
        return params.lam * (1.0 - math.exp(-(n + 1.0)))
    return 0.0


def utility(
    a: int,
    n: float,
    theta: "Theta | float",
    params: UtilityParams,
    cost: float | None = None,
) -> float:
    """Payoff of playing action a (1 = forage) with n other robots foraging."""
    if a not in (0, 1):
        raise ValueError(f"action must be 0 or 1, got {a}")
    if n < 0:
        raise ValueError(f"forager count must be >= 0, got {n}")
    c = params.c_a if cost is None else cost
    th = _theta_value(theta)
    reward = a * (params.kappa + _crowding_term(n, params) + th)
    return -(n + a) * c + reward


def marginal_utility(
    n: float,
    theta: "Theta | float",
    params: UtilityParams,
    cost: float | None = None,
) -> float:
    """Benefit of switching from idle to forage given n other foragers.

    Accepts non-integer n: the equilibrium condition evaluates this at the
    expected forager count.
    """
    c = params.c_a if cost is None else cost
    return -c + params.kappa + _crowding_term(n, params) + _theta_value(theta)


def dominance_bounds(params: UtilityParams) -> tuple[float, float]:
    """Open interval of theta with a mixed equilibrium (negative feedback).

    Below the lower bound idling is strictly dominant, above the upper bound
    foraging is strictly dominant.
    """
    if params.feedback is Feedback.POSITIVE:
        raise ValueError(
            "dominance_bounds applies to negative feedback; "
            "use positive_feedback_bounds for the positive variant"
        )
    gap = params.c_a - params.kappa
    return gap - params.lam * math.exp(-1.0), gap


def positive_feedback_bounds(params: UtilityParams) -> tuple[float, float]:
    """Dominance band for the positive-feedback variant (bounds invert).

    Below the lower bound idling is strictly dominant; above the upper bound
    foraging is strictly dominant.  Between them the marginal utility is
    increasing in n, so any established crowd is self-reinforcing.
    """
    if params.feedback is not Feedback.POSITIVE:
        raise ValueError("positive_feedback_bounds requires feedback = POSITIVE")
    gap = params.c_a - params.kappa
    return gap - params.lam, gap - params.lam * (1.0 - math.exp(-1.0))


def finite_threshold(n_active: int, params: UtilityParams) -> float:
    """Forage-dominance threshold for a finite population of n_active robots.

    The worst case for a would-be forager is all n_active - 1 others already
    foraging; removing robots lowers this threshold, so recruitment makes the
    survivors forage sooner.
    """
    if n_active < 1:
        raise ValueError(f"population must be >= 1, got {n_active}")
    if params.feedback is not Feedback.NEGATIVE:
        raise ValueError("finite_threshold requires feedback = NEGATIVE")
    return params.c_a - params.kappa - params.lam * math.exp(-float(n_active))


def equilibrium_foragers(
    theta: "Theta | float", params: UtilityParams
) -> EquilibriumResult:
    """Classify the regime at theta and solve for the expected forager count."""
    if params.feedback is not Feedback.NEGATIVE:
        raise ValueError("equilibrium_foragers requires feedback = NEGATIVE")
    th = _theta_value(theta)
    low, high = dominance_bounds(params)
    if th >= high:
        return EquilibriumResult(Regime.DOMINANT_FORAGE, math.inf, probability=1.0)
    if th <= low:
        return EquilibriumResult(Regime.DOMINANT_IDLE, 0.0, probability=0.0)
    ratio = (params.c_a - params.kappa - th) / params.lam
    if ratio <= 0:
        raise ValueError(
            f"log argument {ratio:g} <= 0: theta = {th:g} belongs to the "
            "forage-dominant regime"
        )
    expected_n = -math.log(ratio) - 1.0
    return EquilibriumResult(Regime.MIXED, expected_n)


def forage_probability(
    theta: "Theta | float",
    n_star: float,
    n_active: int,
    params: UtilityParams,
    cost: float | None = None,
) -> float:
    """Per-robot probability of an idle robot starting to forage.

    Chosen so the expected total forager count after all idle robots sample
    lands on the mixed equilibrium.  Check order matters: dominance first,
    then indifference, then the closed form, then clamping; this keeps the
    logarithm argument positive.
    """
    if not 0 <= n_star <= n_active:
        raise ValueError(f"need 0 <= n_star <= n_active, got {n_star}, {n_active}")
    if n_active < 1:
        raise ValueError(f"population must be >= 1, got {n_active}")
    c = params.c_a if cost is None else cost
    th = _theta_value(theta)
    if params.feedback is Feedback.NEGATIVE:
        if th >= c - params.kappa:
            return 1.0
        if n_star >= n_active:
            return 1.0
        if marginal_utility(n_star, th, params, cost=c) <= 0:
            return 0.0
        expected_n = -math.log((c - params.kappa - th) / params.lam) - 1.0
        p = (expected_n - n_star) / (n_active - n_star)
        return min(1.0, max(0.0, p))
    # Positive feedback and no feedback degenerate to a threshold rule: the
    # marginal utility of joining does not fall as others join, so any
    # positive margin recruits every idle robot.
    return 1.0 if marginal_utility(n_star, th, params, cost=c) > 0 else 0.0
