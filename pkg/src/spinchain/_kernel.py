"""Compiled inner loops for the RK4 integrator and the slice-propagator oracle.

Both kernels are deliberately independent: the RK4 path works in the
interaction picture from a flip-pair table, the oracle applies per-slice
matrix exponentials in the Schrodinger picture from a dense ladder-operator
matrix built elsewhere.  They share only the parameter arrays passed in.
"""
from __future__ import annotations

import cmath

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _rhs_into(out, d, t, energies, rows, cols, upper, carrier, phi, half_rabi):
    out[:] = 0.0
    z = cmath.exp(-1j * (carrier * t + phi))
    zc = z.conjugate()
    for i in range(rows.size):
        m = rows[i]
        k = cols[i]
        w = -half_rabi * (z if upper[i] else zc)
        out[m] += -1j * w * cmath.exp(1j * (energies[m] - energies[k]) * t) * d[k]


@njit(cache=True, nogil=True)
def rk4_span(d, t0, dt, n_steps, energies, rows, cols, upper, carrier, phi, half_rabi):
    """Advance d (in place) by n_steps uniform RK4 steps from t0."""
    dim = d.size
    k1 = np.empty(dim, dtype=np.complex128)
    k2 = np.empty(dim, dtype=np.complex128)
    k3 = np.empty(dim, dtype=np.complex128)
    k4 = np.empty(dim, dtype=np.complex128)
    tmp = np.empty(dim, dtype=np.complex128)
    for s in range(n_steps):
        t = t0 + s * dt
        _rhs_into(k1, d, t, energies, rows, cols, upper, carrier, phi, half_rabi)
        for i in range(dim):
            tmp[i] = d[i] + 0.5 * dt * k1[i]
        _rhs_into(k2, tmp, t + 0.5 * dt, energies, rows, cols, upper, carrier, phi, half_rabi)
        for i in range(dim):
            tmp[i] = d[i] + 0.5 * dt * k2[i]
        _rhs_into(k3, tmp, t + 0.5 * dt, energies, rows, cols, upper, carrier, phi, half_rabi)
        for i in range(dim):
            tmp[i] = d[i] + dt * k3[i]
        _rhs_into(k4, tmp, t + dt, energies, rows, cols, upper, carrier, phi, half_rabi)
        for i in range(dim):
            d[i] += (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])


@njit(cache=True, nogil=True)
def oracle_span(c, t0, dt, n_slices, h0_diag, ladder_up, carrier, phi, half_rabi):
    """Advance Schrodinger-picture amplitudes c (in place) over n_slices.

    Each slice freezes H at its midpoint and applies exp(-i H dt) to the
    state via a Taylor series summed until the term norm drops below
    machine tolerance.
    """
    dim = c.size
    h = np.empty((dim, dim), dtype=np.complex128)
    term = np.empty(dim, dtype=np.complex128)
    nxt = np.empty(dim, dtype=np.complex128)
    for s in range(n_slices):
        t_mid = t0 + (s + 0.5) * dt
        z = cmath.exp(1j * (carrier * t_mid + phi))
        zc = z.conjugate()
        for m in range(dim):
            for k in range(dim):
                h[m, k] = -half_rabi * (z * ladder_up[m, k] + zc * ladder_up[k, m].conjugate())
            h[m, m] += h0_diag[m]
        for i in range(dim):
            term[i] = c[i]
        order = 1
        while True:
            scale = 0.0
            for m in range(dim):
                acc = 0.0 + 0.0j
                for k in range(dim):
                    acc += h[m, k] * term[k]
                nxt[m] = (-1j * dt / order) * acc
                scale += abs(nxt[m])
            for i in range(dim):
                term[i] = nxt[i]
                c[i] += term[i]
            if scale < 1e-16 or order > 60:
                break
            order += 1
