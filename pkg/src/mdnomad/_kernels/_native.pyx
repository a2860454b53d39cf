# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled stepping kernels for the path simulators.

The per-step loops over small state arrays are where Python call overhead
dominates; everything else in the package stays on BLAS-backed NumPy.
Expression order matches fallback.py so the two backends agree bit for bit
on identical noise.
"""

from libc.math cimport sqrt

import numpy as np

cimport numpy as cnp

cnp.import_array()


def vdp_steps(cnp.float64_t[::1] x, cnp.float64_t[::1] y,
              cnp.float64_t[::1] lam, double mu, double dt,
              cnp.float64_t[:, ::1] noise):
    """Advance Van der Pol states in place through noise.shape[0] steps."""
    cdef Py_ssize_t n_steps = noise.shape[0]
    cdef Py_ssize_t n_paths = x.shape[0]
    cdef double sqrt_dt = sqrt(dt)
    cdef Py_ssize_t k, p
    cdef double xp, yp, x_new
    for k in range(n_steps):
        for p in range(n_paths):
            xp = x[p]
            yp = y[p]
            x_new = xp + yp * dt
            y[p] = yp + mu * (1.0 - xp * xp) * yp * dt \
                + (lam[p] * lam[p]) * xp * sqrt_dt * noise[k, p]
            x[p] = x_new
    return np.asarray(x), np.asarray(y)


def lorenz96_steps(cnp.float64_t[:, ::1] state, double forcing, double lam,
                   double dt, cnp.float64_t[:, :, ::1] noise):
    """Advance Lorenz-96 paths in place; state is (P, N), noise (S, P, N)."""
    cdef Py_ssize_t n_steps = noise.shape[0]
    cdef Py_ssize_t n_paths = state.shape[0]
    cdef Py_ssize_t n_comp = state.shape[1]
    cdef double sqrt_dt = sqrt(dt)
    cdef Py_ssize_t k, p, i, ip1, im1, im2
    cdef double drift
    cdef cnp.ndarray[cnp.float64_t, ndim=1] scratch = np.empty(n_comp)
    cdef cnp.float64_t[::1] new_row = scratch
    for k in range(n_steps):
        for p in range(n_paths):
            for i in range(n_comp):
                ip1 = i + 1 if i + 1 < n_comp else 0
                im1 = i - 1 if i >= 1 else n_comp - 1
                im2 = i - 2 if i >= 2 else n_comp + i - 2
                drift = (state[p, ip1] - state[p, im2]) * state[p, im1] \
                    - state[p, i] + forcing
                new_row[i] = state[p, i] + drift * dt \
                    + lam * sqrt_dt * noise[k, p, i]
            for i in range(n_comp):
                state[p, i] = new_row[i]
    return np.asarray(state)
