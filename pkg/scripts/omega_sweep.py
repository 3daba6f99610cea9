"""Fidelity against the Rabi frequency, with the 2*pi*k points it should track.

The full grid is 401 points (about 15 minutes on one core); ``--points``
gives a coarser uniform grid on the same interval.
"""

import argparse
from pathlib import Path

import numpy as np

from spinshor import ChainParameters
from spinshor.analysis import OMEGA_GRID, prominent_peaks, sweep_omega
from spinshor.pulse_control import rabi_table


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--points", type=int, default=None)
    parser.add_argument("--workers", type=int, default=None)
    parser.add_argument("--out", type=Path, default=Path("results/sweep_omega.csv"))
    args = parser.parse_args()

    grid = OMEGA_GRID if args.points is None else np.round(np.linspace(0.07, 0.15, args.points), 10)
    params = ChainParameters()
    result = sweep_omega(grid, params, workers=args.workers)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    result.write_csv(args.out)

    lo, hi = grid[0], grid[-1]
    marks = [r for r in rabi_table(params, range(1, 400), extended=False) if lo <= r.omega <= hi]
    for x, y in prominent_peaks(result.grid, result.population):
        nearest = min(marks, key=lambda r: abs(r.omega - x))
        print(f"peak Omega={x:.5f} Fpop={y:.4f}  nearest 2*pi*k point: "
              f"{nearest.label} k={nearest.k} ({nearest.omega:.6f})")


if __name__ == "__main__":
    main()
