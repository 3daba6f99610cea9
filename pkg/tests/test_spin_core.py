import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import h0_matrix
from spinshor.spin_core import (
    BasisState,
    ChainParameters,
    Pulse,
    coupling_element,
    energies,
    energy,
    flip_pairs,
    flip_signature,
    resonant_drive_frequency,
    same_family,
    transition_frequency,
)

states = st.integers(0, 15)
freqs = st.floats(-1e3, 1e3, allow_nan=False)


@st.composite
def chains(draw):
    larmor = draw(st.lists(st.floats(1, 1e3), min_size=4, max_size=4, unique=True))
    return ChainParameters(tuple(larmor), draw(freqs), draw(freqs))


# E values frozen from the Kronecker-product construction in oracles.h0_matrix.
def test_energy_ground_state(params):
    assert energy(0, params) == pytest.approx(-765.4, abs=1e-12)


def test_energy_first_excitation(params):
    assert energy(1, params) == pytest.approx(-655.0, abs=1e-12)
    assert abs(energy(0, params) - energy(1, params)) == pytest.approx(110.4)
    omega0, j, jp = 100, 10, 0.4
    assert abs(energy(0, params) - energy(1, params)) == pytest.approx(omega0 + j + jp)


def test_energy_zero_parameters():
    # Larmor frequencies must be distinct, so zero them via the formula directly.
    p = ChainParameters((1e-9, 2e-9, 3e-9, 4e-9), 0.0, 0.0)
    assert all(abs(energy(m, p)) < 1e-8 for m in range(16))


@given(chains())
def test_energy_matches_matrix(p):
    diag = np.diag(h0_matrix(p.larmor, p.j1, p.j2))
    np.testing.assert_allclose(energies(p), diag, rtol=1e-12, atol=1e-9)


@given(chains(), states)
def test_energy_global_flip_symmetry(p, m):
    flipped = ChainParameters(tuple(-w for w in p.larmor), p.j1, p.j2)
    assert energy(m ^ 0b1111, flipped) == pytest.approx(energy(m, p), abs=1e-9)


def test_transition_frequency_examples(params):
    assert transition_frequency(0, 1, params) == pytest.approx(-110.4)
    # qubit 2 has two nearest neighbours: omega_2 + 2J + J'
    assert transition_frequency(4, 0, params) == pytest.approx(420.4)
    assert all(transition_frequency(m, m, params) == 0 for m in range(16))


@given(states, states)
def test_transition_frequency_antisymmetric(m, k):
    p = ChainParameters()
    assert transition_frequency(m, k, p) == -transition_frequency(k, m, p)


def test_resonant_drive_frequency(params):
    assert resonant_drive_frequency(0, 4, params) == pytest.approx(420.4)
    assert resonant_drive_frequency(0, 1, params) == pytest.approx(110.4)
    with pytest.raises(ValueError, match="2 bits"):
        resonant_drive_frequency(0, 3, params)


def test_omega0_family_present(params):
    qubit0 = {round(resonant_drive_frequency(lo, up, params), 9)
              for lo, up, j in flip_pairs() if j == 0}
    for sj in (1, -1):
        for sjp in (1, -1):
            assert round(100 + sj * 10 + sjp * 0.4, 9) in qubit0


@given(chains())
def test_flip_frequency_decomposition(p):
    for lo, up, j in flip_pairs():
        _, a, b = flip_signature(lo, j)
        expected = p.larmor[j] + a * p.j1 + b * p.j2
        assert transition_frequency(up, lo, p) == pytest.approx(expected, abs=1e-9)


def test_same_family_symmetric_neighbours():
    # 2<->6 and 8<->12 flip qubit 2 with one J neighbour excited each side
    assert same_family((2, 6, 2), (8, 12, 2))
    assert not same_family((0, 1, 0), (4, 5, 0))
    assert same_family((0, 1, 0), (8, 9, 0))


def test_coupling_element_examples():
    pulse = Pulse(110.4, 0.1)
    assert coupling_element(0, 1, pulse, 0.0) == pytest.approx(-0.05)
    assert coupling_element(1, 0, pulse, 0.0) == pytest.approx(-0.05)
    assert coupling_element(0, 3, pulse, 0.0) == 0


@given(states, states, st.floats(0, 100), st.floats(-math.pi, math.pi))
def test_coupling_hermitian_and_sparse(m, k, t, phase):
    pulse = Pulse(123.0, 0.3, phase=phase)
    w = coupling_element(m, k, pulse, t)
    assert w == pytest.approx(np.conj(coupling_element(k, m, pulse, t)))
    if bin(m ^ k).count("1") != 1:
        assert w == 0
    else:
        assert abs(w) == pytest.approx(0.15)


def test_coupling_raising_phase():
    pulse = Pulse(10.0, 1.0, phase=0.3)
    t = 0.01
    arg = 2 * math.pi * 10.0 * t + 0.3
    # k has the flipped bit set -> I^+ -> e^{+i arg}
    assert coupling_element(0, 1, pulse, t) == pytest.approx(-0.5 * np.exp(1j * arg))


def test_basis_state_registers():
    s = BasisState(7)
    assert s.bits == (1, 1, 1, 0)
    assert (s.x, s.y) == (1, 3)
    assert BasisState.from_registers(2, 1).index == 9
    assert str(BasisState(11)) == "|10;11>"
    with pytest.raises(ValueError):
        BasisState(16)


def test_chain_parameter_validation():
    with pytest.raises(ValueError):
        ChainParameters((100, 100, 400, 800))
    with pytest.raises(ValueError):
        ChainParameters((100, 200, 400))
    with pytest.raises(ValueError):
        ChainParameters(j1=float("nan"))
    assert ChainParameters(j2=0).j2 == 0


def test_pulse_validation_and_duration():
    assert Pulse(100, 0.1, math.pi).duration == pytest.approx(5.0)
    assert Pulse(100, 0.1, math.pi / 2).duration == pytest.approx(2.5)
    for bad in ({"rabi": 0}, {"rabi": -1}, {"drive_frequency": 0}):
        kwargs = {"drive_frequency": 100, "rabi": 0.1, **bad}
        with pytest.raises(ValueError):
            Pulse(**kwargs)
