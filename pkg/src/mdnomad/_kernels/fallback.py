"""Pure-NumPy stepping kernels.

These mirror the compiled kernels in _native.pyx operation for operation
(same expression order, no FMA contraction there), so both backends produce
identical trajectories from identical noise arrays.
"""

from __future__ import annotations

import numpy as np


def vdp_steps(x, y, lam, mu, dt, noise):
    """Advance Van der Pol states in place through noise.shape[0] steps.

    x, y: (P,) state arrays, modified in place.
    lam:  (P,) noise strengths; the diffusion coefficient is lam^2 * x.
    noise: (S, P) standard normal draws for the y component.
    """
    sqrt_dt = np.sqrt(dt)
    for k in range(noise.shape[0]):
        x_new = x + y * dt
        y += mu * (1.0 - x * x) * y * dt + (lam * lam) * x * sqrt_dt * noise[k]
        x[:] = x_new
    return x, y


def lorenz96_steps(state, forcing, lam, dt, noise):
    """Advance Lorenz-96 paths in place; state is (P, N), noise (S, P, N)."""
    sqrt_dt = np.sqrt(dt)
    for k in range(noise.shape[0]):
        xp1 = np.roll(state, -1, axis=1)
        xm2 = np.roll(state, 2, axis=1)
        xm1 = np.roll(state, 1, axis=1)
        state += ((xp1 - xm2) * xm1 - state + forcing) * dt \
            + lam * sqrt_dt * noise[k]
    return state
