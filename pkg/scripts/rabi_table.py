"""2*pi*k Rabi frequencies for every Ising detuning inside a window."""

import argparse
from pathlib import Path

from spinshor import ChainParameters
from spinshor.pulse_control import rabi_table, write_rabi_table


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--k-max", type=int, default=300)
    parser.add_argument("--window", type=float, nargs=2, default=(0.08, 0.081))
    parser.add_argument("--out", type=Path, default=Path("results/rabi_table.csv"))
    args = parser.parse_args()

    rows = rabi_table(ChainParameters(), range(1, args.k_max + 1))
    args.out.parent.mkdir(parents=True, exist_ok=True)
    write_rabi_table(rows, args.out)
    lo, hi = args.window
    for r in rows:
        if lo <= r.omega <= hi:
            print(f"{r.label:>7}  k={r.k:4d}  Omega={r.omega:.6f}")


if __name__ == "__main__":
    main()
