"""Shor factorization of N=4 as a 12-pulse sequence on the spin chain.

Register layout: |x; y> = |i3 i2; i1 i0>, so basis index = 4*x + y.

The three stages and the transitions they address:

* superposition, pi/2 pulses: 0-4, 0-8, 4-12  -> (|0>+|4>+|8>+|12>)/2
* oracle y = 3^x mod 4, pi pulses: 0-1, 4-5, 5-7, 13-15  -> {1, 7, 9, 15}
* Fourier stage, pi pulses: 6-7, 2-6, 2-3, 14-15, 11-15  -> {1, 3, 9, 11}

Each pulse is tuned to the resonance of its labelled transition under the
current chain parameters.  Transitions of qubit 0 ignore qubit 3, so e.g. the
0-1 pulse also moves 8 -> 9; that is what the sequence relies on.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from spinshor.dynamics import (
    IntegratorConfig,
    StateVector,
    Trajectory,
    run_sequence,
)
from spinshor.spin_core import (
    N_STATES,
    ChainParameters,
    Pulse,
    flip_pairs,
    resonant_drive_frequency,
    same_family,
)

log = logging.getLogger(__name__)

STAGE_TRANSITIONS = {
    "superposition": ([(0, 4), (0, 8), (4, 12)], math.pi / 2),
    "oracle": ([(0, 1), (4, 5), (5, 7), (13, 15)], math.pi),
    "fourier": ([(6, 7), (2, 6), (2, 3), (14, 15), (11, 15)], math.pi),
}
STAGE_NAMES = tuple(STAGE_TRANSITIONS)
# Populated basis states at the end of each stage in the ideal run.
STAGE_TARGETS = {
    "superposition": (0, 4, 8, 12),
    "oracle": (1, 7, 9, 15),
    "fourier": (1, 3, 9, 11),
}
EXPECTED_SUPPORT = STAGE_TARGETS["fourier"]
DEFAULT_RESOLUTION = 0.5
PEAK_THRESHOLD = 0.1


class AddressabilityError(ValueError):
    """A protocol pulse is within the resolution of an unrelated transition."""


class ProtocolFailure(RuntimeError):
    """The final distribution does not reveal a period."""

    def __init__(self, message, probabilities=None):
        super().__init__(message)
        self.probabilities = probabilities


class OddPeriodError(ValueError):
    """Odd period: no factors from q^(T/2) +- 1, retry with another q."""


# -- classical layer ---------------------------------------------------------

def mod_exp(q: int, x: int, n: int) -> int:
    """q**x mod n by square-and-multiply."""
    if n < 2:
        raise ValueError("modulus must be >= 2")
    if x < 0:
        raise ValueError("exponent must be >= 0")
    result, base = 1 % n, q % n
    while x:
        if x & 1:
            result = result * base % n
        base = base * base % n
        x >>= 1
    return result


def classical_period(q: int, n: int) -> int:
    """Smallest T >= 1 with q**T = 1 (mod n), by direct scan."""
    if n < 2:
        raise ValueError("modulus must be >= 2")
    if math.gcd(q, n) != 1:
        raise ValueError(f"{q} and {n} are not coprime")
    value = q % n
    for t in range(1, n + 1):
        if value == 1 % n:
            return t
        value = value * q % n
    raise AssertionError("unreachable for coprime inputs")


def factors_from_period(q: int, period: int, n: int) -> tuple[int, int]:
    if period % 2:
        raise OddPeriodError(f"period {period} is odd; retry with a different q")
    half = mod_exp(q, period // 2, n)
    return math.gcd(half - 1, n), math.gcd(half + 1, n)


@dataclass(frozen=True)
class ShorProblem:
    n: int = 4
    q: int = 3
    x_bits: int = 2
    y_bits: int = 2

    def __post_init__(self):
        if math.gcd(self.q, self.n) != 1:
            raise ValueError(f"q={self.q} is not coprime with N={self.n}")
        if (self.x_bits, self.y_bits) != (2, 2):
            raise ValueError("only the 2+2 qubit layout is implemented")

    @property
    def period(self) -> int:
        return classical_period(self.q, self.n)


# -- pulse protocol ----------------------------------------------------------

@dataclass(frozen=True)
class ProtocolStage:
    name: str
    pulses: tuple[Pulse, ...]
    transitions: tuple[tuple[int, int], ...]


def _degeneracies(params: ChainParameters, transitions, resolution: float):
    pairs = [tuple(int(v) for v in row) for row in flip_pairs()]
    by_states = {(lo, up): (lo, up, j) for lo, up, j in pairs}
    problems = []
    for a, b in transitions:
        target = by_states[(min(a, b), max(a, b))]
        drive = resonant_drive_frequency(a, b, params)
        for other in pairs:
            if same_family(target, other):
                continue
            freq = resonant_drive_frequency(other[0], other[1], params)
            if abs(freq - drive) < resolution:
                problems.append(((a, b), (other[0], other[1]), abs(freq - drive)))
    return problems


def build_protocol(
    params: ChainParameters,
    rabi: float,
    resolution: float = DEFAULT_RESOLUTION,
    strict: bool = True,
) -> list[ProtocolStage]:
    """The three pulse stages with drives tuned to the current spectrum.

    An addressed transition closer than ``resolution`` (2*pi*MHz) to a
    transition it is not meant to drive raises :class:`AddressabilityError`
    when ``strict``; otherwise it is logged and the protocol is still built.
    """
    if not rabi > 0:
        raise ValueError("rabi must be positive")
    stages = []
    all_transitions = []
    for name, (transitions, angle) in STAGE_TRANSITIONS.items():
        pulses = tuple(
            Pulse(resonant_drive_frequency(a, b, params), rabi, angle, 0.0, label=f"{a}-{b}")
            for a, b in transitions
        )
        stages.append(ProtocolStage(name, pulses, tuple(transitions)))
        all_transitions.extend(transitions)
    problems = _degeneracies(params, all_transitions, resolution)
    if problems:
        detail = ", ".join(f"{t}~{o} ({sep:.3g})" for t, o, sep in problems[:6])
        msg = f"{len(problems)} near-degenerate transitions: {detail}"
        if strict:
            raise AddressabilityError(msg)
        log.warning(msg)
    return stages


def protocol_pulses(stages) -> list[Pulse]:
    return [p for stage in stages for p in stage.pulses]


def expected_wavefunction() -> StateVector:
    """(|00;01> + |00;11> + |10;01> + |10;11>)/2, compared in the interaction picture."""
    amps = np.zeros(N_STATES, dtype=np.complex128)
    amps[list(EXPECTED_SUPPORT)] = 0.5
    return StateVector(amps)


def x_marginal(probabilities) -> np.ndarray:
    """Probability of each x = (i3 i2) after tracing out y."""
    return np.asarray(probabilities, dtype=float).reshape(4, 4).sum(axis=1)


def peak_spacing(marginal, threshold: float = PEAK_THRESHOLD) -> tuple[list[int], int | None]:
    """Peaks above ``threshold * max`` and their common spacing (None if irregular)."""
    marginal = np.asarray(marginal, dtype=float)
    top = marginal.max()
    if not top > 0:
        return [], None
    peaks = [int(x) for x in np.flatnonzero(marginal >= threshold * top)]
    size = len(marginal)
    if peaks == [0]:
        return peaks, size
    spacing = peaks[1] - peaks[0] if len(peaks) > 1 else None
    if (spacing is None or peaks[0] != 0 or size % spacing
            or peaks != list(range(0, size, spacing))):
        return peaks, None
    return peaks, spacing


@dataclass
class ShorOutcome:
    params: ChainParameters
    rabi: float
    final: StateVector
    probabilities: np.ndarray
    marginal: np.ndarray
    peaks: list[int]
    spacing: int | None
    period: int | None
    factors: tuple[int, int] | None
    stage_states: dict[str, StateVector] = field(default_factory=dict)
    trajectories: dict[str, Trajectory] = field(default_factory=dict)
    diagnostic: str = ""

    @property
    def succeeded(self) -> bool:
        return self.factors is not None

    def to_dict(self) -> dict:
        return {
            "params": self.params.to_dict(),
            "rabi": self.rabi,
            "final_time_us": self.final.time,
            "probabilities": [float(f"{p:.12g}") for p in self.probabilities],
            "x_marginal": [float(f"{p:.12g}") for p in self.marginal],
            "peaks": self.peaks,
            "delta_x": self.spacing,
            "period": self.period,
            "factors": list(self.factors) if self.factors else None,
            "diagnostic": self.diagnostic,
        }

    def write_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def simulate_protocol(
    params: ChainParameters,
    rabi: float,
    cfg: IntegratorConfig = IntegratorConfig(),
    *,
    record: bool = False,
    strict: bool = False,
    resolution: float = DEFAULT_RESOLUTION,
) -> tuple[StateVector, dict[str, StateVector], dict[str, Trajectory]]:
    """Evolve |0000> through all stages; returns final and per-stage states."""
    stages = build_protocol(params, rabi, resolution=resolution, strict=strict)
    state = StateVector.ground()
    stage_states, trajectories = {}, {}
    for stage in stages:
        state, traj = run_sequence(state, stage.pulses, params, cfg, record=record)
        stage_states[stage.name] = state
        if record:
            trajectories[stage.name] = traj
    return state, stage_states, trajectories


def run_shor(
    params: ChainParameters = ChainParameters(),
    rabi: float = 0.1,
    cfg: IntegratorConfig = IntegratorConfig(),
    *,
    problem: ShorProblem = ShorProblem(),
    record: bool = False,
    strict: bool = False,
) -> ShorOutcome:
    """Run the pulse protocol and read the period off the x-register marginal.

    A distribution without a clean peak comb is returned with ``factors``
    None and a diagnostic; only an empty distribution raises.
    """
    final, stage_states, trajectories = simulate_protocol(
        params, rabi, cfg, record=record, strict=strict)
    probs = final.probabilities
    marginal = x_marginal(probs)
    peaks, spacing = peak_spacing(marginal)
    if not peaks:
        raise ProtocolFailure("no x-register peaks", probs)
    period = factors = None
    diagnostic = ""
    if spacing is None:
        diagnostic = f"irregular peaks {peaks}; marginal {np.round(marginal, 4).tolist()}"
    else:
        period = (1 << problem.x_bits) // spacing
        if period % 2 == 0 and mod_exp(problem.q, period // 2, problem.n) == 1:
            # T is a multiple of the order; any factor gcd returns is luck
            diagnostic = f"T={period} is not the order of {problem.q} mod {problem.n}"
        else:
            try:
                factors = factors_from_period(problem.q, period, problem.n)
            except OddPeriodError as exc:
                diagnostic = str(exc)
    return ShorOutcome(params, rabi, final, probs, marginal, peaks, spacing, period,
                       factors, stage_states, trajectories, diagnostic)


def sample_measurements(outcome: ShorOutcome, shots: int, seed: int = 0) -> np.ndarray:
    """Counts of x-register readouts drawn from the marginal."""
    rng = np.random.default_rng(seed)
    p = outcome.marginal / outcome.marginal.sum()
    return rng.multinomial(shots, p)
