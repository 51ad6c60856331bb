#!/usr/bin/env python3
"""Tabulate the grid-boundary comparison curve (intensities 1 and 2).

Writes figure1.csv with the series value, its certified error bound, and
the Poisson-boundary straight line for comparison.
"""

import argparse

from rarefan.cli import emit_figure1


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out", help="output directory")
    args = parser.parse_args()
    path = emit_figure1(args.out)
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
