"""Classical fourth-order Runge-Kutta stepping."""

from __future__ import annotations

import numpy as np


def rk4_step(rhs, t, z, h):
    """One classical RK4 step of ``dz/dt = rhs(t, z)``; ``z`` may be batched along leading axes."""
    k1 = rhs(t, z)
    k2 = rhs(t + 0.5 * h, z + 0.5 * h * k1)
    k3 = rhs(t + 0.5 * h, z + 0.5 * h * k2)
    k4 = rhs(t + h, z + h * k3)
    return z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def rk4_quadrature(fn, a: float, b: float, n: int) -> np.ndarray:
    """Cumulative RK4 solution of ``dV/dx = fn(x)``, ``V(a) = 0``, on ``n`` uniform steps.

    With a right-hand side independent of ``V`` the two midpoint stages coincide, so a
    step is ``h/6 (fn(x) + 4 fn(x + h/2) + fn(x + h))``.  The integrand is sampled
    once on the half-step grid.  Returns the ``n + 1`` values ``V(x_0), ..., V(x_n)``.
    """
    if n < 1:
        raise ValueError("need at least one step")
    nodes = np.linspace(a, b, 2 * n + 1)
    vals = np.asarray(fn(nodes), dtype=float)
    h = (b - a) / n
    incr = (h / 6.0) * (vals[:-1:2] + 4.0 * vals[1::2] + vals[2::2])
    out = np.empty(n + 1)
    out[0] = 0.0
    np.cumsum(incr, out=out[1:])
    return out
