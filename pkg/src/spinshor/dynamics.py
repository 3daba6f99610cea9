"""Time evolution of the 16 coefficients under rectangular RF pulses.

The workhorse is fixed-step RK4 on the interaction-picture equations

    i dD_m/dt = sum_k (W_mk/hbar) D_k exp(i w_mk t),   C_m = D_m exp(-i E_m t/hbar)

with time in microseconds and frequencies converted to rad/us.  Global time
runs continuously across a pulse sequence, so the RF phase of every pulse is
``2*pi*f*t + phi`` with ``t`` measured from the start of the sequence.

Only the 32 single-flip pairs carry coupling, so a derivative evaluation is
64 complex multiply-adds; the loops live in :mod:`spinshor._kernels`.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from spinshor import _kernels
from spinshor.spin_core import (
    N_STATES,
    TWO_PI,
    ChainParameters,
    Pulse,
    flip_pairs,
)

INTERACTION = "interaction"
SCHRODINGER = "schrodinger"
NORM_TOL = 1e-6

_ALL_PAIRS = flip_pairs()


@dataclass(frozen=True)
class StateVector:
    """16 amplitudes tagged with their picture and the global time (us)."""

    amplitudes: np.ndarray
    picture: str = INTERACTION
    time: float = 0.0

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.shape != (N_STATES,):
            raise ValueError(f"expected {N_STATES} amplitudes, got {amps.shape}")
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        if self.picture not in (INTERACTION, SCHRODINGER):
            raise ValueError(f"unknown picture {self.picture!r}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "time", float(self.time))

    @classmethod
    def basis(cls, index: int, picture: str = INTERACTION, time: float = 0.0) -> "StateVector":
        amps = np.zeros(N_STATES, dtype=np.complex128)
        amps[int(index)] = 1.0
        return cls(amps, picture, time)

    @classmethod
    def ground(cls) -> "StateVector":
        return cls.basis(0)

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.probabilities)))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm ** 2 - 1.0) <= tol


@dataclass(frozen=True)
class IntegratorConfig:
    """Step-size policy for the RK4 integrators.

    The step is ``max_phase_step / R`` where ``R`` is the fastest phase rate in
    the equations (largest pair detuning plus the Rabi frequency, rad/us).
    ``fixed_step_override`` (us) replaces that choice; it is shortened so the
    pulse is an integer number of steps.
    """

    max_phase_step: float = TWO_PI / 100
    fixed_step_override: float | None = None
    record_stride: int = 1000
    keep_amplitudes: bool = False

    def __post_init__(self):
        if not 0 < self.max_phase_step < math.pi:
            raise ValueError("max_phase_step must lie in (0, pi)")
        if self.record_stride < 1:
            raise ValueError("record_stride must be >= 1")
        if self.fixed_step_override is not None and not self.fixed_step_override > 0:
            raise ValueError("fixed_step_override must be positive")

    def replace(self, **changes) -> "IntegratorConfig":
        values = {
            "max_phase_step": self.max_phase_step,
            "fixed_step_override": self.fixed_step_override,
            "record_stride": self.record_stride,
            "keep_amplitudes": self.keep_amplitudes,
        }
        values.update(changes)
        return IntegratorConfig(**values)


# Lab-frame reference needs to resolve exp(-i E_m t) directly.
LAB_CONFIG = IntegratorConfig(max_phase_step=TWO_PI / 1000)


@dataclass
class Trajectory:
    times: np.ndarray = field(default_factory=lambda: np.empty(0))
    probabilities: np.ndarray = field(default_factory=lambda: np.empty((0, N_STATES)))
    amplitudes: np.ndarray | None = None

    def __len__(self):
        return len(self.times)

    @classmethod
    def concatenate(cls, segments: Iterable["Trajectory"]) -> "Trajectory":
        segments = [s for s in segments if len(s)]
        if not segments:
            return cls()
        amps = None
        if all(s.amplitudes is not None for s in segments):
            amps = np.concatenate([s.amplitudes for s in segments])
        return cls(
            np.concatenate([s.times for s in segments]),
            np.concatenate([s.probabilities for s in segments]),
            amps,
        )

    def validate(self, tol: float = 1e-6) -> None:
        if len(self.times) > 1 and not np.all(np.diff(self.times) > 0):
            raise ValueError("trajectory times are not strictly increasing")
        sums = self.probabilities.sum(axis=1)
        if np.any(np.abs(sums - 1.0) > tol):
            raise ValueError("trajectory probabilities do not sum to one")

    def write_csv(self, path) -> None:
        header = ["t"] + [f"p{m}" for m in range(N_STATES)]
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for t, row in zip(self.times, self.probabilities):
                writer.writerow([f"{t:.12g}"] + [f"{p:.12g}" for p in row])


def _pair_arrays(pairs):
    rows = _ALL_PAIRS if pairs is None else np.asarray(pairs, dtype=np.int64).reshape(-1, 3)
    return np.ascontiguousarray(rows[:, 0]), np.ascontiguousarray(rows[:, 1])


def _angular_energies(params: ChainParameters) -> np.ndarray:
    return TWO_PI * params.energy_table


def _pulse_constants(pulse: Pulse, params: ChainParameters, lower, upper):
    energy = _angular_energies(params)
    omega = TWO_PI * pulse.drive_frequency
    delta = omega + energy[lower] - energy[upper]
    g = -0.5 * TWO_PI * pulse.rabi * complex(math.cos(pulse.phase), math.sin(pulse.phase))
    return delta, g


def _step_count(duration: float, rate: float, cfg: IntegratorConfig) -> tuple[int, float]:
    if duration == 0:
        return 0, 0.0
    if cfg.fixed_step_override is not None:
        if cfg.fixed_step_override * rate > math.pi:
            raise ValueError(
                f"step {cfg.fixed_step_override:g} us advances the fastest phase by "
                f"{cfg.fixed_step_override * rate:.3g} rad (> pi)"
            )
        target = cfg.fixed_step_override
    else:
        target = cfg.max_phase_step / rate
    nsteps = max(1, math.ceil(duration / target - 1e-9))
    return nsteps, duration / nsteps


def derivative(state: StateVector, pulse: Pulse, params: ChainParameters, t: float,
               pairs=None) -> np.ndarray:
    """dD/dt in rad/us at global time ``t`` (us) for an interaction-picture state."""
    if state.picture != INTERACTION:
        raise ValueError("derivative needs an interaction-picture state")
    lower, upper = _pair_arrays(pairs)
    delta, g = _pulse_constants(pulse, params, lower, upper)
    phases = np.exp(1j * delta * t)
    out = np.empty(N_STATES, dtype=np.complex128)
    _kernels.interaction_rates(state.amplitudes, lower, upper, g, phases, out)
    return out


def apply_pulse(
    state: StateVector,
    pulse: Pulse,
    params: ChainParameters,
    cfg: IntegratorConfig = IntegratorConfig(),
    *,
    pairs=None,
    duration: float | None = None,
    record: bool = True,
) -> tuple[StateVector, Trajectory]:
    """Integrate one pulse starting at ``state.time``.

    ``pairs`` restricts the coupling to a subset of single-flip pairs (rows of
    ``(lower, upper, qubit)``); ``duration`` overrides ``pulse.duration``.
    """
    if state.picture != INTERACTION:
        raise ValueError("apply_pulse needs an interaction-picture state")
    if not state.is_normalized():
        raise ValueError(f"state is not normalized (norm {state.norm:.12g})")
    tau = pulse.duration if duration is None else float(duration)
    if tau < 0:
        raise ValueError("pulse duration must be non-negative")

    lower, upper = _pair_arrays(pairs)
    delta, g = _pulse_constants(pulse, params, lower, upper)
    rate = (float(np.max(np.abs(delta))) if len(delta) else 0.0) + TWO_PI * pulse.rabi
    nsteps, h = _step_count(tau, rate, cfg)
    if nsteps == 0:
        return state, Trajectory()

    stride = cfg.record_stride if record else nsteps
    d, rec_t, rec_p, rec_a = _kernels.rk4_interaction(
        np.ascontiguousarray(state.amplitudes), lower, upper, delta, g,
        state.time, h, nsteps, stride, record and cfg.keep_amplitudes,
    )
    final = StateVector(d, INTERACTION, state.time + tau)
    if not record:
        return final, Trajectory()
    return final, Trajectory(rec_t, rec_p, rec_a if cfg.keep_amplitudes else None)


def run_sequence(
    initial: StateVector,
    pulses: Sequence[Pulse],
    params: ChainParameters,
    cfg: IntegratorConfig = IntegratorConfig(),
    *,
    record: bool = True,
) -> tuple[StateVector, Trajectory]:
    """Apply ``pulses`` back to back; global time is never reset."""
    state = to_interaction(initial, params) if initial.picture == SCHRODINGER else initial
    segments = []
    for pulse in pulses:
        state, segment = apply_pulse(state, pulse, params, cfg, record=record)
        segments.append(segment)
    return state, Trajectory.concatenate(segments)


def to_schrodinger(state: StateVector, params: ChainParameters) -> StateVector:
    """C_m = D_m exp(-i E_m t / hbar) at ``state.time``."""
    if state.picture == SCHRODINGER:
        return state
    phase = np.exp(-1j * _angular_energies(params) * state.time)
    return StateVector(state.amplitudes * phase, SCHRODINGER, state.time)


def to_interaction(state: StateVector, params: ChainParameters) -> StateVector:
    if state.picture == INTERACTION:
        return state
    phase = np.exp(1j * _angular_energies(params) * state.time)
    return StateVector(state.amplitudes * phase, INTERACTION, state.time)


def lab_frame_reference(
    initial: StateVector,
    pulses: Sequence[Pulse],
    params: ChainParameters,
    cfg: IntegratorConfig = LAB_CONFIG,
) -> StateVector:
    """Integrate i dC/dt = E C + W(t) C without the interaction-picture transform.

    Independent of :func:`run_sequence`; the step must resolve the bare
    energies, so this is only meant for cross-checks.
    """
    state = to_schrodinger(initial, params)
    energy = _angular_energies(params)
    lower, upper = _pair_arrays(None)
    c = np.ascontiguousarray(state.amplitudes)
    t = state.time
    for pulse in pulses:
        omega = TWO_PI * pulse.drive_frequency
        g = -0.5 * TWO_PI * pulse.rabi * complex(math.cos(pulse.phase), math.sin(pulse.phase))
        rate = max(float(np.max(np.abs(energy))), omega) + TWO_PI * pulse.rabi
        nsteps, h = _step_count(pulse.duration, rate, cfg)
        c = _kernels.rk4_lab(c, energy, lower, upper, omega, g, t, h, nsteps)
        t += pulse.duration
    return StateVector(c, SCHRODINGER, t)
