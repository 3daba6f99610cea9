"""Fidelity of the protocol against J'/J at fixed J and Omega."""

import argparse
from pathlib import Path

import numpy as np

from spinshor import ChainParameters
from spinshor.analysis import JPRIME_GRID, plateau_onset, sweep_jprime


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rabi", type=float, default=0.1)
    parser.add_argument("--points", type=int, default=len(JPRIME_GRID))
    parser.add_argument("--workers", type=int, default=None)
    parser.add_argument("--out", type=Path, default=Path("results/sweep_jprime.csv"))
    args = parser.parse_args()

    grid = np.round(np.linspace(0.0, 0.1, args.points), 10)
    result = sweep_jprime(grid, ChainParameters(), args.rabi, workers=args.workers)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    result.write_csv(args.out)
    for x, f, fp in zip(result.grid, result.magnitude, result.population):
        print(f"{x:6.3f}  |F|={f:.4f}  Fpop={fp:.4f}")
    print("plateau onset (population, 0.99 of max):",
          plateau_onset(result.grid, result.population))
    print("plateau onset (|F|, 0.99 of max):", plateau_onset(result.grid, result.magnitude))


if __name__ == "__main__":
    main()
