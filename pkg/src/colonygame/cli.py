"""Command-line front end: scenarios, sweeps, demos, and the live service."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .mechanism import UtilityParams
from .runner import (
    ScenarioConfig,
    run_collapse_demo,
    run_heterogeneity_demo,
    run_replicates,
    sweep_equilibrium,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="colonygame",
        description="Foraging-colony global game: simulation, analysis, live steering.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a seeded scenario and write CSV artifacts")
    run_p.add_argument("--config", type=Path, help="scenario config JSON")
    run_p.add_argument("--seed", type=int, help="override the scenario seed")
    run_p.add_argument(
        "--paper-scenario",
        action="store_true",
        help="use the default 1800 s scenario with 6 robots recruited at t=900",
    )
    run_p.add_argument("--out", type=Path, help="output directory for CSV artifacts")

    sweep_p = sub.add_parser("sweep", help="tabulate the equilibrium over a theta grid")
    sweep_p.add_argument("--theta-min", type=float, default=0.0)
    sweep_p.add_argument("--theta-max", type=float, default=1.0)
    sweep_p.add_argument("--steps", type=int, default=101)
    sweep_p.add_argument("--population", type=int, default=12)
    sweep_p.add_argument("--out", type=Path, default=Path("sweep.csv"))

    collapse_p = sub.add_parser(
        "collapse-demo", help="positive-feedback cascade vs negative-feedback recovery"
    )
    collapse_p.add_argument("--seed", type=int, default=0)
    collapse_p.add_argument("--out", type=Path, help="output directory")

    hetero_p = sub.add_parser(
        "hetero-demo", help="first-foraging order under heterogeneous costs"
    )
    hetero_p.add_argument(
        "--costs", type=float, nargs="+", default=[0.9, 1.0, 1.1]
    )
    hetero_p.add_argument("--out", type=Path, help="output JSON path")

    serve_p = sub.add_parser("serve", help="run the live steering service")
    serve_p.add_argument("--config", type=Path, help="scenario config JSON")
    serve_p.add_argument("--host", default="127.0.0.1")
    serve_p.add_argument("--port", type=int, default=8765)
    serve_p.add_argument("--speed", type=float, default=1.0)
    serve_p.add_argument("--seed", type=int, default=0)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            if args.config:
                config = ScenarioConfig.from_json(args.config)
            elif args.paper_scenario:
                config = ScenarioConfig.paper_scenario()
            else:
                config = ScenarioConfig()
            overrides = {}
            if args.seed is not None:
                overrides["seed"] = args.seed
            if args.out is not None:
                overrides["out_dir"] = str(args.out)
            if overrides:
                import dataclasses

                config = dataclasses.replace(config, **overrides)
            results = run_replicates(config)
            for res in results:
                print(json.dumps(res.summary, sort_keys=True))
        elif args.command == "sweep":
            thetas = np.linspace(args.theta_min, args.theta_max, args.steps)
            sweep_equilibrium(UtilityParams(), thetas, args.population, out_path=args.out)
            print(f"wrote {args.out}")
        elif args.command == "collapse-demo":
            verdict = run_collapse_demo(seed=args.seed, out_dir=args.out)
            print(json.dumps(verdict, indent=2, sort_keys=True))
        elif args.command == "hetero-demo":
            report = run_heterogeneity_demo(tuple(args.costs), out_path=args.out)
            print(json.dumps(report, indent=2, sort_keys=True))
        elif args.command == "serve":
            from .service import serve

            config = (
                ScenarioConfig.from_json(args.config)
                if args.config
                else ScenarioConfig(seed=args.seed)
            )
            serve(config, host=args.host, port=args.port, speed=args.speed)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
