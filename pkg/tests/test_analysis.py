import cmath

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spinshor.analysis import (
    JPRIME_GRID,
    OMEGA_GRID,
    OMEGA_SMOKE_GRID,
    SweepSpec,
    expectation_iz,
    fidelity,
    local_maxima,
    plateau_onset,
    prominent_peaks,
    spin_expectations,
    sweep_jprime,
    sweep_omega,
)
from spinshor.dynamics import SCHRODINGER, StateVector, to_schrodinger
from spinshor.shor import expected_wavefunction


def random_state(seed, time=0.0):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=16) + 1j * rng.normal(size=16)
    return StateVector(v / np.linalg.norm(v), time=time)


def test_iz_term_lists():
    p = np.arange(16, dtype=float)
    p /= p.sum()
    s = StateVector(np.sqrt(p))
    q = s.probabilities
    explicit = [
        q[0] - q[1] + q[2] - q[3] + q[4] - q[5] + q[6] - q[7]
        + q[8] - q[9] + q[10] - q[11] + q[12] - q[13] + q[14] - q[15],
        q[0] + q[1] - q[2] - q[3] + q[4] + q[5] - q[6] - q[7]
        + q[8] + q[9] - q[10] - q[11] + q[12] + q[13] - q[14] - q[15],
        q[0] + q[1] + q[2] + q[3] - q[4] - q[5] - q[6] - q[7]
        + q[8] + q[9] + q[10] + q[11] - q[12] - q[13] - q[14] - q[15],
        q[0] + q[1] + q[2] + q[3] + q[4] + q[5] + q[6] + q[7]
        - q[8] - q[9] - q[10] - q[11] - q[12] - q[13] - q[14] - q[15],
    ]
    for j in range(4):
        assert expectation_iz(s, j) == pytest.approx(0.5 * explicit[j])
    np.testing.assert_allclose(spin_expectations(q), 0.5 * np.array(explicit))


def test_iz_ground_state():
    assert [expectation_iz(StateVector.ground(), j) for j in range(4)] == [0.5] * 4
    with pytest.raises(ValueError):
        expectation_iz(StateVector.ground(), 4)


def test_fidelity_self_overlap():
    psi = expected_wavefunction()
    r = fidelity(psi, psi)
    assert r.overlap == pytest.approx(1.0)
    assert r.population == pytest.approx(1.0)


@given(st.integers(0, 2**32 - 1), st.floats(-np.pi, np.pi))
def test_fidelity_global_phase(seed, phi):
    a, b = random_state(seed), random_state(seed + 1)
    rotated = StateVector(b.amplitudes * cmath.exp(1j * phi))
    assert fidelity(a, rotated).magnitude == pytest.approx(fidelity(a, b).magnitude)
    assert fidelity(a, b).magnitude <= 1 + 1e-12
    assert fidelity(a, b).population <= 1 + 1e-12


def test_fidelity_branch_phases():
    # correct populations but branch phases (i, -1, -1, -i)/2
    amps = np.zeros(16, complex)
    amps[[1, 3, 9, 11]] = np.array([1j, -1, -1, -1j]) / 2
    r = fidelity(expected_wavefunction(), StateVector(amps))
    assert r.magnitude == pytest.approx(0.5)
    assert r.population == pytest.approx(1.0)


def test_fidelity_picture_conversion(params):
    a, b = random_state(1, time=3.0), random_state(2, time=3.0)
    lab = to_schrodinger(b, params)
    assert fidelity(a, lab, params).overlap == pytest.approx(fidelity(a, b).overlap)
    with pytest.raises(ValueError, match="pictures"):
        fidelity(a, lab)
    with pytest.raises(ValueError, match="normalized"):
        fidelity(a, StateVector(np.ones(16)))
    assert lab.picture == SCHRODINGER


def test_default_grids():
    assert len(JPRIME_GRID) == 51 and JPRIME_GRID[25] == 0.05
    assert len(OMEGA_GRID) == 401 and OMEGA_GRID[-1] == 0.15
    assert len(OMEGA_SMOKE_GRID) == 50


def test_sweep_spec_validation(params):
    with pytest.raises(ValueError):
        SweepSpec("temperature", (1.0,))
    with pytest.raises(ValueError):
        SweepSpec("omega", ())
    with pytest.raises(ValueError):
        SweepSpec("omega", (0.1, 0.09))
    with pytest.raises(ValueError):
        SweepSpec("omega", (0.0, 0.1))
    p, rabi = SweepSpec("jprime_ratio", (0.04,), params).point(0.04)
    assert p.j2 == pytest.approx(0.4) and rabi == 0.1


def test_sweeps_are_deterministic_and_parallel_safe(tmp_path):
    a = sweep_omega((0.1, 0.11), workers=1)
    b = sweep_omega((0.1, 0.11), workers=2)
    assert np.array_equal(a.overlap, b.overlap)
    assert a.population[0] > 0.99
    a.write_csv(tmp_path / "a.csv")
    b.write_csv(tmp_path / "b.csv")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    lines = (tmp_path / "a.csv").read_text().splitlines()
    assert lines[0] == "omega,|F|,ReF,ImF,Fpop"
    assert len(lines) == 3


def test_jprime_sweep_endpoints(tmp_path):
    r = sweep_jprime((0.0, 0.04), workers=1)
    assert r.population[0] < 0.6 < 0.99 < r.population[1]
    r.write_csv(tmp_path / "j.csv")
    assert (tmp_path / "j.csv").read_text().startswith("ratio,|F|")
    with pytest.raises(ValueError):
        r.curve("phase")


def test_curve_features():
    x = np.linspace(0, 1, 11)
    y = np.array([0, 1, 0, 0.05, 0.04, 0.06, 0, 2, 0, 0, 0], dtype=float)
    assert local_maxima(y) == [1, 3, 5, 7]
    assert [px for px, _ in prominent_peaks(x, y)] == pytest.approx([0.1, 0.7])
    assert prominent_peaks(x, np.ones(11)) == []
    assert plateau_onset(x, np.minimum(x, 0.5)) == pytest.approx(0.5)
    assert plateau_onset(x, 1 - x) is None
