"""Numerical self-checks of the integrator, shared by ``selftest`` and the tests."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from spinshor.dynamics import (
    IntegratorConfig,
    StateVector,
    apply_pulse,
    lab_frame_reference,
    run_sequence,
    to_schrodinger,
)
from spinshor.pulse_control import TwoLevelSystem, analytic_evolution, two_pi_k_rabi
from spinshor.spin_core import N_STATES, TWO_PI, ChainParameters, Pulse, resonant_drive_frequency

# Pair used for isolated two-level runs: |0> (ground member) <-> |1> (excited).
TWO_LEVEL_PAIR = ((0, 1, 0),)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    value: float
    tolerance: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.value:.3e} (tol {self.tolerance:.0e})"


def two_level_run(params: ChainParameters, detuning: float, rabi: float,
                  c_p: complex = 0.6, c_m: complex = 0.8j, angle: float = math.pi,
                  cfg: IntegratorConfig = IntegratorConfig()):
    """Evolve the isolated pair 0 <-> 1 driven ``detuning`` below resonance.

    Returns numerical and closed-form (D_p, D_m); all inputs in 2*pi*MHz.
    """
    drive = resonant_drive_frequency(0, 1, params) - detuning
    pulse = Pulse(drive, rabi, angle)
    amps = np.zeros(N_STATES, dtype=np.complex128)
    amps[1], amps[0] = c_p, c_m
    final, _ = apply_pulse(StateVector(amps), pulse, params, cfg,
                           pairs=TWO_LEVEL_PAIR, record=False)
    sys = TwoLevelSystem(TWO_PI * detuning, TWO_PI * rabi, c_p, c_m)
    exact = analytic_evolution(sys, pulse.duration)
    return (final.amplitudes[1], final.amplitudes[0]), exact


def check_analytic_oracle(params, rabi=0.1, cfg=IntegratorConfig(), tol=1e-8):
    j, jp = params.j1, params.j2
    worst = 0.0
    for delta in (0.0, 2 * jp, 2 * j, 4 * j):
        num, exact = two_level_run(params, delta, rabi, cfg=cfg)
        worst = max(worst, abs(num[0] - exact[0]), abs(num[1] - exact[1]))
    return CheckResult("two-level vs closed form", worst <= tol, worst, tol)


def check_two_pi_k_return(params, cfg=IntegratorConfig(), tol=1e-6):
    worst = 0.0
    for delta, k in ((2 * params.j2, 4), (2 * params.j2, 5), (2 * params.j1, 98)):
        c_p, c_m = 0.6, 0.8j
        (d_p, d_m), _ = two_level_run(params, delta, two_pi_k_rabi(delta, k), c_p, c_m, cfg=cfg)
        worst = max(worst, abs(abs(d_p) ** 2 - abs(c_p) ** 2), abs(abs(d_m) ** 2 - abs(c_m) ** 2))
    return CheckResult("2*pi*k population return", worst <= tol, worst, tol)


def _reference_pulse(params, rabi):
    return Pulse(resonant_drive_frequency(0, 1, params), rabi, math.pi)


def check_norm(params, rabi=0.1, cfg=IntegratorConfig(), tol=1e-9):
    final, _ = apply_pulse(StateVector.ground(), _reference_pulse(params, rabi), params, cfg,
                           record=False)
    drift = abs(final.norm ** 2 - 1.0)
    return CheckResult("norm drift per pulse", drift <= tol, drift, tol)


def _halved(cfg: IntegratorConfig) -> IntegratorConfig:
    if cfg.fixed_step_override is not None:
        return cfg.replace(fixed_step_override=cfg.fixed_step_override / 2)
    return cfg.replace(max_phase_step=cfg.max_phase_step / 2)


def check_step_halving(params, rabi=0.1, cfg=IntegratorConfig(), tol=1e-8, pulses=None):
    pulses = pulses or [_reference_pulse(params, rabi)]
    a, _ = run_sequence(StateVector.ground(), pulses, params, cfg, record=False)
    b, _ = run_sequence(StateVector.ground(), pulses, params, _halved(cfg), record=False)
    diff = float(np.max(np.abs(a.probabilities - b.probabilities)))
    return CheckResult("step-halving convergence", diff <= tol, diff, tol)


def check_picture_equivalence(params, rabi=0.1, cfg=IntegratorConfig(), tol=1e-8, pulses=None):
    pulses = pulses or [_reference_pulse(params, rabi)]
    inter, _ = run_sequence(StateVector.ground(), pulses, params, cfg, record=False)
    lab = lab_frame_reference(StateVector.ground(), pulses, params)
    diff = float(np.max(np.abs(to_schrodinger(inter, params).probabilities - lab.probabilities)))
    return CheckResult("interaction vs lab frame", diff <= tol, diff, tol)


def run_all(params: ChainParameters, rabi: float = 0.1,
            cfg: IntegratorConfig = IntegratorConfig()) -> list[CheckResult]:
    return [
        check_analytic_oracle(params, rabi, cfg),
        check_two_pi_k_return(params, cfg),
        check_norm(params, rabi, cfg),
        check_step_halving(params, rabi, cfg),
        check_picture_equivalence(params, rabi, cfg),
    ]
