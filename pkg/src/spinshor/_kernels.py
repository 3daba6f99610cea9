"""Compiled RK4 loops for the interaction-picture and lab-frame equations.

Everything here is in rad/us and microseconds.  The coupling is stored as a
list of single-flip pairs (lower, upper); the drive only ever connects those.
"""

import numba
import numpy as np

# Phase factors are advanced by multiplication and resynced from scratch
# this often to keep rounding drift below 1e-13.
RESYNC = 4096


@numba.njit(cache=True)
def interaction_rates(d, lower, upper, g, phases, out):
    """out = dD/dt for phases[p] = exp(i*delta_p*t), g = -(Omega/2) e^{i phi}."""
    out[:] = 0.0
    mig = -1j * g
    migc = -1j * np.conj(g)
    for p in range(lower.shape[0]):
        lo = lower[p]
        up = upper[p]
        ph = phases[p]
        out[lo] += mig * ph * d[up]
        out[up] += migc * np.conj(ph) * d[lo]


@numba.njit(cache=True)
def _phases_at(delta, t, out):
    for p in range(delta.shape[0]):
        a = delta[p] * t
        out[p] = np.cos(a) + 1j * np.sin(a)


@numba.njit(cache=True, fastmath=True)
def _coupled_rates(d, lower, upper, coef, out):
    # coef[p] = -i g exp(i delta_p t); the reverse element is -conj(coef[p]).
    out[:] = 0.0
    for p in range(lower.shape[0]):
        lo = lower[p]
        up = upper[p]
        a = coef[p]
        out[lo] += a * d[up]
        out[up] -= a.conjugate() * d[lo]


@numba.njit(cache=True, fastmath=True)
def rk4_interaction(d0, lower, upper, delta, g, t0, h, nsteps, stride, keep_amps):
    """Fixed-step RK4 for i dD_m/dt = sum_k W_mk e^{i w_mk t} D_k.

    Returns the final amplitudes, recorded times, probabilities and
    (optionally) amplitudes at every ``stride``-th step, always including
    the last one.
    """
    n = d0.shape[0]
    npairs = lower.shape[0]
    nrec = nsteps // stride
    if nsteps % stride != 0:
        nrec += 1
    rec_t = np.empty(nrec)
    rec_p = np.empty((nrec, n))
    rec_a = np.empty((nrec if keep_amps else 0, n), dtype=np.complex128)

    d = d0.copy()
    tmp = np.empty(n, dtype=np.complex128)
    k1 = np.empty(n, dtype=np.complex128)
    k2 = np.empty(n, dtype=np.complex128)
    k3 = np.empty(n, dtype=np.complex128)
    k4 = np.empty(n, dtype=np.complex128)
    c0 = np.empty(npairs, dtype=np.complex128)
    c_mid = np.empty(npairs, dtype=np.complex128)
    c_end = np.empty(npairs, dtype=np.complex128)
    rot_half = np.empty(npairs, dtype=np.complex128)
    _phases_at(delta, 0.5 * h, rot_half)
    mig = -1j * g

    half = 0.5 * h
    sixth = h / 6.0
    irec = 0
    for step in range(nsteps):
        if step % RESYNC == 0:
            _phases_at(delta, t0 + step * h, c0)
            for p in range(npairs):
                c0[p] *= mig
        for p in range(npairs):
            c_mid[p] = c0[p] * rot_half[p]
            c_end[p] = c_mid[p] * rot_half[p]

        _coupled_rates(d, lower, upper, c0, k1)
        for m in range(n):
            tmp[m] = d[m] + half * k1[m]
        _coupled_rates(tmp, lower, upper, c_mid, k2)
        for m in range(n):
            tmp[m] = d[m] + half * k2[m]
        _coupled_rates(tmp, lower, upper, c_mid, k3)
        for m in range(n):
            tmp[m] = d[m] + h * k3[m]
        _coupled_rates(tmp, lower, upper, c_end, k4)
        for m in range(n):
            d[m] += sixth * (k1[m] + 2.0 * k2[m] + 2.0 * k3[m] + k4[m])

        for p in range(npairs):
            c0[p] = c_end[p]

        done = step + 1
        if done % stride == 0 or done == nsteps:
            rec_t[irec] = t0 + done * h
            for m in range(n):
                rec_p[irec, m] = d[m].real ** 2 + d[m].imag ** 2
            if keep_amps:
                for m in range(n):
                    rec_a[irec, m] = d[m]
            irec += 1
    return d, rec_t, rec_p, rec_a


@numba.njit(cache=True)
def lab_rates(c, energy, lower, upper, g, drive_phase, out):
    """out = dC/dt for i dC_m/dt = E_m C_m + sum_k W_mk(t) C_k."""
    for m in range(c.shape[0]):
        out[m] = -1j * energy[m] * c[m]
    up_coef = -1j * g * drive_phase
    down_coef = -1j * np.conj(g * drive_phase)
    for p in range(lower.shape[0]):
        lo = lower[p]
        up = upper[p]
        out[lo] += up_coef * c[up]
        out[up] += down_coef * c[lo]


@numba.njit(cache=True)
def rk4_lab(c0, energy, lower, upper, omega, g, t0, h, nsteps):
    """Fixed-step RK4 on the untransformed coefficient equations."""
    n = c0.shape[0]
    c = c0.copy()
    tmp = np.empty(n, dtype=np.complex128)
    k1 = np.empty(n, dtype=np.complex128)
    k2 = np.empty(n, dtype=np.complex128)
    k3 = np.empty(n, dtype=np.complex128)
    k4 = np.empty(n, dtype=np.complex128)
    rot_half = np.cos(0.5 * omega * h) + 1j * np.sin(0.5 * omega * h)
    ph0 = np.cos(omega * t0) + 1j * np.sin(omega * t0)
    half = 0.5 * h
    sixth = h / 6.0
    for step in range(nsteps):
        if step % RESYNC == 0 and step > 0:
            a = omega * (t0 + step * h)
            ph0 = np.cos(a) + 1j * np.sin(a)
        ph_mid = ph0 * rot_half
        ph_end = ph_mid * rot_half
        lab_rates(c, energy, lower, upper, g, ph0, k1)
        for m in range(n):
            tmp[m] = c[m] + half * k1[m]
        lab_rates(tmp, energy, lower, upper, g, ph_mid, k2)
        for m in range(n):
            tmp[m] = c[m] + half * k2[m]
        lab_rates(tmp, energy, lower, upper, g, ph_mid, k3)
        for m in range(n):
            tmp[m] = c[m] + h * k3[m]
        lab_rates(tmp, energy, lower, upper, g, ph_end, k4)
        for m in range(n):
            c[m] += sixth * (k1[m] + 2.0 * k2[m] + 2.0 * k3[m] + k4[m])
        ph0 = ph_end
    return c
