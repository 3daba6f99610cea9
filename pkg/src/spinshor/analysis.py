"""Observables and parameter sweeps over the Shor protocol.

Two fidelity numbers are kept for every run:

* ``overlap``: the complex inner product <psi_expected|psi> of
  interaction-picture amplitudes, and its magnitude;
* ``population``: sum_m sqrt(p_expected,m * p_m), which ignores the relative
  phases of the four target branches.

The pulses imprint branch-dependent phases (each resonant pi-pulse
multiplies by i, and off-resonant spectators pick up light shifts), so even a
perfect run has |overlap| = 1/2 against the all-positive target.  Peak and
plateau analysis therefore defaults to the population fidelity; the complex
overlap is still recorded.
"""

from __future__ import annotations

import csv
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.signal import find_peaks

from spinshor.dynamics import IntegratorConfig, StateVector, to_interaction, to_schrodinger
from spinshor.dynamics import INTERACTION
from spinshor.shor import expected_wavefunction, simulate_protocol
from spinshor.spin_core import N_QUBITS, N_STATES, ChainParameters

JPRIME_GRID = tuple(np.round(np.arange(0.0, 0.1 + 1e-12, 0.002), 10))
OMEGA_GRID = tuple(np.round(np.arange(0.07, 0.15 + 1e-12, 0.0002), 10))
OMEGA_SMOKE_GRID = tuple(np.round(np.linspace(0.07, 0.15, 50), 10))
NORM_TOL = 1e-6
_SIGNS = np.array([[1 - 2 * ((m >> j) & 1) for m in range(N_STATES)] for j in range(N_QUBITS)])


@dataclass(frozen=True)
class FidelityReport:
    overlap: complex
    population: float

    @property
    def magnitude(self) -> float:
        return abs(self.overlap)


def fidelity(expected: StateVector, actual: StateVector,
             params: ChainParameters | None = None) -> FidelityReport:
    """<expected|actual>, converting ``actual`` to the expected picture if needed."""
    for name, s in (("expected", expected), ("actual", actual)):
        if not s.is_normalized(NORM_TOL):
            raise ValueError(f"{name} state is not normalized (norm {s.norm:.9g})")
    if actual.picture != expected.picture:
        if params is None:
            raise ValueError("pictures differ; pass params to convert")
        convert = to_interaction if expected.picture == INTERACTION else to_schrodinger
        actual = convert(actual, params)
    overlap = complex(np.vdot(expected.amplitudes, actual.amplitudes))
    population = float(np.sum(np.sqrt(expected.probabilities * actual.probabilities)))
    return FidelityReport(overlap, population)


def expectation_iz(state: StateVector, j: int) -> float:
    """<I_j^z> = (1/2) sum_m (-1)^{bit_j(m)} |a_m|^2."""
    if not 0 <= j < N_QUBITS:
        raise ValueError(f"qubit index out of range: {j}")
    return 0.5 * float(_SIGNS[j] @ state.probabilities)


def spin_expectations(probabilities) -> np.ndarray:
    """<I_j^z> for every qubit; rows of ``probabilities`` map to rows of the result."""
    return 0.5 * np.asarray(probabilities) @ _SIGNS.T


# -- sweeps ------------------------------------------------------------------

@dataclass(frozen=True)
class SweepSpec:
    variable: str
    grid: tuple[float, ...]
    params: ChainParameters = ChainParameters()
    rabi: float = 0.1

    def __post_init__(self):
        if self.variable not in ("jprime_ratio", "omega"):
            raise ValueError(f"unknown sweep variable {self.variable!r}")
        grid = tuple(float(v) for v in self.grid)
        if not grid:
            raise ValueError("sweep grid is empty")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("sweep grid must be strictly increasing")
        if self.variable == "omega" and grid[0] <= 0:
            raise ValueError("Rabi frequencies must be positive")
        object.__setattr__(self, "grid", grid)

    def point(self, value: float) -> tuple[ChainParameters, float]:
        if self.variable == "omega":
            return self.params, value
        return self.params.replace(j2=value * self.params.j1), self.rabi


@dataclass
class SweepResult:
    variable: str
    grid: np.ndarray
    overlap: np.ndarray
    population: np.ndarray
    probabilities: np.ndarray = field(repr=False)

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.overlap)

    def curve(self, metric: str = "population") -> np.ndarray:
        if metric == "population":
            return self.population
        if metric == "magnitude":
            return self.magnitude
        raise ValueError(f"unknown metric {metric!r}")

    def write_csv(self, path) -> None:
        name = "ratio" if self.variable == "jprime_ratio" else "omega"
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow([name, "|F|", "ReF", "ImF", "Fpop"])
            for x, f, fp in zip(self.grid, self.overlap, self.population):
                writer.writerow([f"{x:.12g}", f"{abs(f):.12g}", f"{f.real:.12g}",
                                 f"{f.imag:.12g}", f"{fp:.12g}"])


def _run_point(args):
    params, rabi, cfg = args
    final, _, _ = simulate_protocol(params, rabi, cfg)
    report = fidelity(expected_wavefunction(), final)
    return report.overlap, report.population, final.probabilities


def run_sweep(spec: SweepSpec, cfg: IntegratorConfig = IntegratorConfig(),
              workers: int | None = None) -> SweepResult:
    """Evaluate every grid point; points are independent and run in a process pool."""
    jobs = [(*spec.point(v), cfg) for v in spec.grid]
    workers = workers or os.cpu_count() or 1
    if workers == 1 or len(jobs) == 1:
        results = [_run_point(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            results = list(pool.map(_run_point, jobs))
    overlap = np.array([r[0] for r in results], dtype=np.complex128)
    population = np.array([r[1] for r in results])
    probs = np.array([r[2] for r in results])
    return SweepResult(spec.variable, np.array(spec.grid), overlap, population, probs)


def sweep_jprime(grid: Sequence[float] = JPRIME_GRID, params: ChainParameters = ChainParameters(),
                 rabi: float = 0.1, cfg: IntegratorConfig = IntegratorConfig(),
                 workers: int | None = None) -> SweepResult:
    """Fidelity against J'/J; the protocol is re-tuned at every point."""
    return run_sweep(SweepSpec("jprime_ratio", tuple(grid), params, rabi), cfg, workers)


def sweep_omega(grid: Sequence[float] = OMEGA_GRID, params: ChainParameters = ChainParameters(),
                cfg: IntegratorConfig = IntegratorConfig(),
                workers: int | None = None) -> SweepResult:
    """Fidelity against the Rabi frequency (pulse lengths scale as 1/Omega)."""
    return run_sweep(SweepSpec("omega", tuple(grid), params), cfg, workers)


# -- curve features ----------------------------------------------------------

def local_maxima(y) -> list[int]:
    """Interior indices strictly above the left neighbour and not below the right."""
    y = np.asarray(y)
    return [i for i in range(1, len(y) - 1) if y[i] > y[i - 1] and y[i] >= y[i + 1]]


def prominent_peaks(x, y, rel_prominence: float = 0.2) -> list[tuple[float, float]]:
    """Local maxima whose topographic prominence is at least ``rel_prominence``
    of the curve's full range, as (x, y) pairs sorted by x.

    Small ripples riding on the flank of a broad peak have tiny prominence and
    are not reported.
    """
    x, y = np.asarray(x), np.asarray(y)
    span = float(y.max() - y.min())
    if span == 0:
        return []
    idx, _ = find_peaks(y, prominence=rel_prominence * span)
    return [(float(x[i]), float(y[i])) for i in idx]


def plateau_onset(x, y, ratio: float = 0.99) -> float | None:
    """Smallest x from which the curve stays at or above ``ratio * max``."""
    x, y = np.asarray(x), np.asarray(y)
    ok = y >= ratio * y.max()
    if not ok[-1]:
        return None
    start = len(ok) - 1
    while start > 0 and ok[start - 1]:
        start -= 1
    return float(x[start])
