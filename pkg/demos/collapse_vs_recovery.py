"""Why the feedback sign matters: cascade vs. self-repair.

Runs the same removal script twice.  Under positive feedback (foraging
gets *more* attractive the more robots forage), removing every forager
leaves nobody willing to restart, and the colony decays monotonically.
Under the default negative feedback, replacements step in within a couple
hundred ticks.  Artifacts go to ./out/collapse/.
"""
import json

from colonygame import run_collapse_demo


def main():
    print("Running the removal script under positive and negative feedback ...")
    verdict = run_collapse_demo(seed=0, out_dir="out/collapse")

    pos, neg = verdict["positive"], verdict["negative"]
    print("\n--- positive feedback ---")
    print(f"removed {pos['foragers_removed']} foragers at t = {pos['removal_time']:.1f} s "
          f"(energy {pos['energy_at_removal']:.1f})")
    print(f"new foragers afterwards: {pos['new_foragers_after_removal']}")
    print(f"energy decayed monotonically: {pos['energy_monotone_decay']}")
    print(f"collapse confirmed: {verdict['collapse_confirmed']}")

    print("\n--- negative feedback (same script) ---")
    print(f"removed {neg['foragers_removed']} foragers at t = {neg['removal_time']:.1f} s")
    print(f"first replacement forager after {neg['recovery_ticks']} ticks")
    print(f"resilience confirmed: {verdict['resilience_confirmed']}")

    print("\nFull verdict:")
    print(json.dumps(verdict, indent=2, sort_keys=True))
    print("\nArtifacts in out/collapse/")


if __name__ == "__main__":
    main()
