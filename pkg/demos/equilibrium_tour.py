"""A guided tour of the forage/idle game before any robot moves.

Walks through the payoff structure, the urgency band where the mixed
equilibrium lives, and how the expected forager count and the individual
switching probability respond to urgency.
"""
import math

import numpy as np

from colonygame import (
    UtilityParams,
    dominance_bounds,
    equilibrium_foragers,
    finite_threshold,
    forage_probability,
    marginal_utility,
)


def main():
    params = UtilityParams()  # c_a = 1, kappa = 0.25, lam = 5.5
    print("Parameters:", params)
    print()

    low, high = dominance_bounds(params)
    print(f"Idle is dominant below theta = {low:.5f} (unreachable: theta >= 0).")
    print(f"Foraging is dominant above theta = {high:.5f}.")
    print("Between those, the only symmetric equilibrium mixes.\n")

    print("Marginal utility of foraging vs. crowd size at theta = 0.5:")
    for n in range(6):
        print(f"  n = {n}:  pi = {marginal_utility(n, 0.5, params):+.4f}")
    print("The margin falls as the crowd grows: classic negative feedback.\n")

    print("Equilibrium expected foragers across the urgency range:")
    for th in np.linspace(0.0, 0.75, 7):
        res = equilibrium_foragers(float(th), params)
        print(f"  theta = {th:.3f}:  regime = {res.regime.value:16s} E[n] = {res.expected_n:.4f}")
    print()

    p = forage_probability(0.5, 1, 12, params)
    print("With 12 robots, 1 already out, theta = 0.5, each idle robot")
    print(f"forages with probability p = {p:.5f}")
    print(f"(analytically (ln 22 - 2)/11 = {(math.log(22) - 2) / 11:.5f}).\n")

    print("Finite-population dominance threshold (smaller crews commit sooner):")
    for n in (1, 2, 4, 8, 12):
        print(f"  N = {n:2d}:  theta_bar = {finite_threshold(n, params):.6f}")


if __name__ == "__main__":
    main()
