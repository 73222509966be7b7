"""The barrier-function velocity filter, shown on a head-on encounter.

Two robots drive straight at each other at full speed.  The filter leaves
each command untouched while the pair is far apart, then bends the
velocities just enough to keep the separation above the 0.5 m contact
distance, with minimal deviation from the desired command.
"""
import numpy as np

from colonygame import SafetyConfig, filter_all


def main():
    cfg = SafetyConfig()  # R = 0.25 m, gamma = 1, v_max = 1 m/s
    dt = 0.1
    pos = np.array([[-3.0, 0.0], [3.0, 0.02]])  # tiny offset breaks symmetry
    print(f"contact distance 2R = {2 * cfg.collision_radius} m, dt = {dt} s\n")
    print(f"{'t':>5} {'separation':>11} {'|v0 desired|':>13} {'|v0 filtered|':>14} {'deviation':>10}")

    min_sep = np.inf
    for k in range(120):
        desired = np.stack([
            (pos[1] - pos[0]) / np.linalg.norm(pos[1] - pos[0]) * cfg.v_max,
            (pos[0] - pos[1]) / np.linalg.norm(pos[0] - pos[1]) * cfg.v_max,
        ])
        V, faults = filter_all(pos, desired, cfg)
        assert not faults
        sep = float(np.linalg.norm(pos[0] - pos[1]))
        min_sep = min(min_sep, sep)
        if k % 10 == 0 or sep < 1.0:
            dev = float(np.linalg.norm(V[0] - desired[0]))
            print(f"{k * dt:5.1f} {sep:11.3f} {np.linalg.norm(desired[0]):13.3f} "
                  f"{np.linalg.norm(V[0]):14.3f} {dev:10.3f}")
        pos += V * dt

    print(f"\nclosest approach: {min_sep:.3f} m "
          f"(never below 2R = {2 * cfg.collision_radius} m: {min_sep >= 2 * cfg.collision_radius})")


if __name__ == "__main__":
    main()
