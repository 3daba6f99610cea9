"""Four-spin Ising chain quantum computer running Shor's algorithm for N=4."""

from spinshor.spin_core import (
    N_QUBITS,
    N_STATES,
    BasisState,
    ChainParameters,
    Pulse,
    coupling_element,
    energies,
    energy,
    resonant_drive_frequency,
    transition_frequency,
)
from spinshor.dynamics import (
    IntegratorConfig,
    StateVector,
    Trajectory,
    apply_pulse,
    derivative,
    lab_frame_reference,
    run_sequence,
    to_interaction,
    to_schrodinger,
)

__all__ = [
    "N_QUBITS",
    "N_STATES",
    "BasisState",
    "ChainParameters",
    "Pulse",
    "coupling_element",
    "energies",
    "energy",
    "resonant_drive_frequency",
    "transition_frequency",
    "IntegratorConfig",
    "StateVector",
    "Trajectory",
    "apply_pulse",
    "derivative",
    "lab_frame_reference",
    "run_sequence",
    "to_interaction",
    "to_schrodinger",
]
