"""Static structure of the four-spin chain.

Frequencies handed to and returned from this module are in units of
2*pi*MHz, i.e. the plain numbers quoted for the chain (omega_0 = 100 means an
angular frequency of 2*pi*100 rad/us).  Only :mod:`spinshor.dynamics` works
in rad/us; the conversion factor is :data:`TWO_PI`.

Basis states are decimal indexed, ``index = 8*i3 + 4*i2 + 2*i1 + i0``, with
bit value 0 the ground state (spin along the static field, I^z = +1/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

N_QUBITS = 4
N_STATES = 1 << N_QUBITS
TWO_PI = 2.0 * math.pi

# Larmor frequencies, couplings and Rabi frequency used for the N=4 run.
DEFAULT_LARMOR = (100.0, 200.0, 400.0, 800.0)
DEFAULT_J1 = 10.0
DEFAULT_J2 = 0.4
DEFAULT_RABI = 0.1


@dataclass(frozen=True)
class ChainParameters:
    """Larmor frequencies and Ising couplings of the chain (2*pi*MHz).

    ``j1`` couples nearest neighbours, ``j2`` next-nearest neighbours.
    """

    larmor: tuple[float, ...] = DEFAULT_LARMOR
    j1: float = DEFAULT_J1
    j2: float = DEFAULT_J2

    def __post_init__(self):
        larmor = tuple(float(w) for w in self.larmor)
        object.__setattr__(self, "larmor", larmor)
        if len(larmor) != N_QUBITS:
            raise ValueError(f"need {N_QUBITS} Larmor frequencies, got {len(larmor)}")
        if not all(math.isfinite(w) for w in larmor):
            raise ValueError("Larmor frequencies must be finite")
        if len(set(larmor)) != N_QUBITS:
            raise ValueError("Larmor frequencies must be pairwise distinct")
        for name in ("j1", "j2"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, value)

    def replace(self, **changes) -> "ChainParameters":
        fields = {"larmor": self.larmor, "j1": self.j1, "j2": self.j2}
        fields.update(changes)
        return ChainParameters(**fields)

    @classmethod
    def from_dict(cls, data: dict) -> "ChainParameters":
        return cls(
            larmor=tuple(data.get("larmor", DEFAULT_LARMOR)),
            j1=data.get("j1", DEFAULT_J1),
            j2=data.get("j2", DEFAULT_J2),
        )

    def to_dict(self) -> dict:
        return {"larmor": list(self.larmor), "j1": self.j1, "j2": self.j2}

    @cached_property
    def energy_table(self) -> np.ndarray:
        """E_m / hbar for all 16 basis states, in 2*pi*MHz."""
        return np.array([energy(m, self) for m in range(N_STATES)])


@dataclass(frozen=True)
class BasisState:
    """Computational basis state |i3 i2 i1 i0>.

    The x-register is (i3, i2) and the y-register is (i1, i0).
    """

    index: int

    def __post_init__(self):
        if not 0 <= int(self.index) < N_STATES:
            raise ValueError(f"basis index out of range: {self.index}")
        object.__setattr__(self, "index", int(self.index))

    def bit(self, j: int) -> int:
        if not 0 <= j < N_QUBITS:
            raise ValueError(f"qubit index out of range: {j}")
        return (self.index >> j) & 1

    @property
    def bits(self) -> tuple[int, ...]:
        """(i0, i1, i2, i3)."""
        return tuple(self.bit(j) for j in range(N_QUBITS))

    @property
    def x(self) -> int:
        return self.index >> 2

    @property
    def y(self) -> int:
        return self.index & 0b11

    @classmethod
    def from_registers(cls, x: int, y: int) -> "BasisState":
        return cls((x << 2) | y)

    def __int__(self) -> int:
        return self.index

    def __index__(self) -> int:
        return self.index

    def __str__(self) -> str:
        return f"|{self.index >> 2:02b};{self.index & 3:02b}>"


def _index(state) -> int:
    idx = int(state)
    if not 0 <= idx < N_STATES:
        raise ValueError(f"basis index out of range: {idx}")
    return idx


def bit(index: int, j: int) -> int:
    return (index >> j) & 1


def hamming(m: int, k: int) -> int:
    return bin(int(m) ^ int(k)).count("1")


@dataclass(frozen=True)
class Pulse:
    """Rectangular RF pulse.

    ``drive_frequency`` and ``rabi`` are in 2*pi*MHz, ``phase`` and ``angle``
    in radians.  The duration is ``angle / (2*pi*rabi)`` microseconds.
    ``label`` is free-form (the protocol uses the addressed transition).
    """

    drive_frequency: float
    rabi: float
    angle: float = math.pi
    phase: float = 0.0
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if not (math.isfinite(self.rabi) and self.rabi > 0):
            raise ValueError(f"Rabi frequency must be positive, got {self.rabi}")
        if not (math.isfinite(self.drive_frequency) and self.drive_frequency > 0):
            raise ValueError(f"drive frequency must be positive, got {self.drive_frequency}")
        if not (math.isfinite(self.angle) and self.angle > 0):
            raise ValueError(f"rotation angle must be positive, got {self.angle}")

    @property
    def duration(self) -> float:
        """Pulse length in microseconds."""
        return self.angle / (TWO_PI * self.rabi)


def energy(state, params: ChainParameters) -> float:
    """Eigenvalue of the diagonal Zeeman + Ising Hamiltonian, E/hbar."""
    idx = _index(state)
    b = [bit(idx, k) for k in range(N_QUBITS)]
    zeeman = sum((-1) ** b[k] * params.larmor[k] for k in range(N_QUBITS))
    first = sum((-1) ** (b[k] + b[k + 1]) for k in range(N_QUBITS - 1))
    second = sum((-1) ** (b[k] + b[k + 2]) for k in range(N_QUBITS - 2))
    return -0.5 * (zeeman + params.j1 * first + params.j2 * second)


def energies(params: ChainParameters) -> np.ndarray:
    return params.energy_table.copy()


def transition_frequency(m, k, params: ChainParameters) -> float:
    """Signed omega_mk = (E_m - E_k)/hbar."""
    table = params.energy_table
    return float(table[_index(m)] - table[_index(k)])


def resonant_drive_frequency(m, k, params: ChainParameters) -> float:
    """Drive frequency resonant with the single-spin flip m <-> k."""
    m, k = _index(m), _index(k)
    if hamming(m, k) != 1:
        raise ValueError(
            f"states {m} and {k} differ in {hamming(m, k)} bits; "
            "only single spin flips are driven"
        )
    return abs(transition_frequency(m, k, params))


def coupling_element(m, k, pulse: Pulse, t: float) -> complex:
    """Matrix element <m|W|k>/hbar of the RF coupling at time ``t`` (us).

    Returned in 2*pi*MHz.  The raising operator I^+ takes a spin from bit 1
    to bit 0, so it connects k -> m when the flipped bit is set in k.
    """
    m, k = _index(m), _index(k)
    if hamming(m, k) != 1:
        return 0j
    arg = TWO_PI * pulse.drive_frequency * t + pulse.phase
    sign = 1.0 if k > m else -1.0
    return -0.5 * pulse.rabi * complex(math.cos(arg), sign * math.sin(arg))


def flip_pairs(n_qubits: int = N_QUBITS) -> np.ndarray:
    """All single-flip pairs as rows (lower, upper, qubit), lower has bit 0."""
    rows = []
    for lower in range(1 << n_qubits):
        for j in range(n_qubits):
            if not (lower >> j) & 1:
                rows.append((lower, lower | (1 << j), j))
    return np.array(rows, dtype=np.int64)


def flip_signature(lower: int, j: int) -> tuple[int, int, int]:
    """(qubit, J coefficient, J' coefficient) of the flip frequency of qubit j.

    The resonance of flipping qubit j out of ``lower`` is
    omega_j + a*J + b*J' with a, b sums of (-1)^bit over first and second
    neighbours.
    """
    a = sum((-1) ** bit(lower, i) for i in (j - 1, j + 1) if 0 <= i < N_QUBITS)
    b = sum((-1) ** bit(lower, i) for i in (j - 2, j + 2) if 0 <= i < N_QUBITS)
    return j, a, b


def same_family(pair_a, pair_b) -> bool:
    """True if two single-flip transitions have the same frequency for any J, J'."""
    return flip_signature(pair_a[0], pair_a[2]) == flip_signature(pair_b[0], pair_b[2])
