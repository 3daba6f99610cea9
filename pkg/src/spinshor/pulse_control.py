"""Two-level analytics: detuned Rabi solution and the 2*pi*k Rabi frequencies.

A spectator pair p <-> m (p the excited member) driven at ``omega`` sees the
detuning ``delta = (E_p - E_m)/hbar - omega``.  Choosing
``rabi = |delta| / sqrt(4k^2 - 1)`` makes the pair complete ``k`` full
generalized Rabi cycles during a pi-pulse, so it returns to its initial
populations.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

from spinshor.spin_core import ChainParameters

K_MAX = 10**6


@dataclass(frozen=True)
class TwoLevelSystem:
    """Detuning and Rabi frequency share units; amplitudes are (C_p(0), C_m(0))."""

    detuning: float
    rabi: float
    c_p: complex = 1.0
    c_m: complex = 0.0

    def __post_init__(self):
        if not self.rabi > 0:
            raise ValueError("rabi must be positive")
        norm = abs(self.c_p) ** 2 + abs(self.c_m) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"initial amplitudes not normalized ({norm!r})")


def effective_rabi(sys: TwoLevelSystem) -> float:
    return math.hypot(sys.rabi, sys.detuning)


def analytic_evolution(sys: TwoLevelSystem, t: float) -> tuple[complex, complex]:
    """Closed-form (D_p(t), D_m(t)) for the isolated detuned pair.

    Solves i dD_m/dt = -(rabi/2) e^{-i delta t} D_p and its conjugate partner.
    The excited member's bracket is cos - i(delta/rabi_e) sin and the ground
    member's is cos + i(delta/rabi_e) sin; with equal signs the map would not
    be unitary.
    """
    rabi_e = math.hypot(sys.rabi, sys.detuning)
    if rabi_e == 0.0:
        return complex(sys.c_p), complex(sys.c_m)
    half = 0.5 * rabi_e * t
    c, s = math.cos(half), math.sin(half)
    ratio_d = sys.detuning / rabi_e
    ratio_o = sys.rabi / rabi_e
    d_p = (sys.c_p * complex(c, -ratio_d * s) + 1j * ratio_o * s * sys.c_m)
    d_m = (sys.c_m * complex(c, ratio_d * s) + 1j * ratio_o * s * sys.c_p)
    rot = 0.5 * sys.detuning * t
    return (d_p * complex(math.cos(rot), math.sin(rot)),
            d_m * complex(math.cos(rot), -math.sin(rot)))


def two_pi_k_rabi(delta: float, k: int) -> float:
    """Rabi frequency for which a pi-pulse is ``k`` full cycles at detuning ``delta``."""
    if int(k) != k or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    if k > K_MAX:
        raise ValueError(f"k is capped at {K_MAX}")
    if delta == 0 or not math.isfinite(delta):
        raise ValueError("detuning must be finite and nonzero")
    return abs(delta) / math.sqrt(4 * k * k - 1)


def detuning_catalog(params: ChainParameters, extended: bool = False) -> dict[str, float]:
    """Spectator detunings produced by the Ising couplings, keyed by label.

    Labels that collapse onto the same value (e.g. when ``j2 == 0``) are
    merged under the shorter label; zero detunings are dropped.  ``extended`` adds
    2J - 2J'.
    """
    j, jp = params.j1, params.j2
    candidates = [
        ("4J+2J'", 4 * j + 2 * jp),
        ("4J", 4 * j),
        ("2J+2J'", 2 * j + 2 * jp),
        ("2J", 2 * j),
        ("2J'", 2 * jp),
    ]
    if extended:
        candidates.append(("2J-2J'", 2 * j - 2 * jp))
    catalog: dict[str, float] = {}
    for label, value in candidates:
        value = abs(value)
        if value == 0:
            continue
        dup = next((key for key, v in catalog.items()
                    if math.isclose(value, v, rel_tol=0, abs_tol=1e-12)), None)
        if dup is None:
            catalog[label] = value
        elif len(label) < len(dup):
            # prefer the plain label, e.g. "4J" over "4J+2J'" when J' = 0
            catalog = {(label if key == dup else key): v for key, v in catalog.items()}
    return catalog


@dataclass(frozen=True)
class RabiRow:
    label: str
    delta: float
    k: int
    omega: float


def rabi_table(params: ChainParameters, k_range, extended: bool = True) -> list[RabiRow]:
    """Omega_Delta^(k) for every catalog detuning and k, sorted by Omega."""
    ks = list(k_range)
    if not ks or min(ks) < 1:
        raise ValueError("k range must be nonempty with k >= 1")
    rows = [
        RabiRow(label, delta, k, two_pi_k_rabi(delta, k))
        for label, delta in detuning_catalog(params, extended=extended).items()
        for k in ks
    ]
    rows.sort(key=lambda r: (r.omega, r.label, r.k))
    return rows


def write_rabi_table(rows: list[RabiRow], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["delta_label", "delta", "k", "omega"])
        for r in rows:
            writer.writerow([r.label, f"{r.delta:.12g}", r.k, f"{r.omega:.12g}"])
