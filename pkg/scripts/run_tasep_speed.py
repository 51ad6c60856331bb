#!/usr/bin/env python3
"""Second-class particle speed experiment for the exclusion process.

Simulates X(t)/t over many replicas for a builtin initial condition and
compares the empirical law against the matching closed form.
"""

import argparse
import json

from rarefan.cli import run_experiment


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--family",
        default="two_corner",
        choices=["two_corner", "periodic", "bernoulli"],
    )
    parser.add_argument(
        "--params",
        default='{"x": 1, "y": 1}',
        help='family parameters as JSON, e.g. \'{"p1": 0.2, "p2": 0.8}\'',
    )
    parser.add_argument("--t", type=float, default=2000.0)
    parser.add_argument("--replicas", type=int, default=2000)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--workers", type=int, default=2)
    parser.add_argument("--ks-tolerance", type=float, default=0.05)
    parser.add_argument("--out", default="out/tasep_speed")
    args = parser.parse_args()

    config = {
        "model": "tasep",
        "profile": {"family": args.family, "params": json.loads(args.params)},
        "t": args.t,
        "replicas": args.replicas,
        "seed": args.seed,
        "workers": args.workers,
        "ks_tolerance": args.ks_tolerance,
    }
    summary = run_experiment(config, args.out)
    print(json.dumps(summary, indent=2, sort_keys=True, default=str))


if __name__ == "__main__":
    main()
