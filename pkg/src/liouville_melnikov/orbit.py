"""The explicit homoclinic orbit of the perturbed-revolution family.

Along the separatrix the Clairaut constant vanishes and the orbit equation reduces to
``(dy/dx)^2 = g(y) / f(x)``.  For ``f = (1 + mu cos x)^-2`` and ``g = y^2 (1 - y^2/c^2)``
it is solved by ``y = c sech(kappa + x + mu sin x)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import ParameterError
from .rk4 import rk4_step
from .surface import LiouvilleSurface

__all__ = [
    "HomoclinicOrbit",
    "orbit_phase",
    "orbit_height",
    "orbit_slope",
    "orbit_apex",
    "orbit_residual",
    "check_orbit_surface",
    "SeparatrixSolution",
    "solve_separatrix_ode",
    "sech",
]


def sech(u):
    """Overflow-free hyperbolic secant."""
    a = np.exp(-np.abs(u))
    return 2.0 * a / (1.0 + a * a)


@dataclass(frozen=True)
class HomoclinicOrbit:
    kappa: float
    mu: float
    amplitude: float = 1.0
    branch: int = 1

    def __post_init__(self):
        if self.branch not in (1, -1):
            raise ParameterError("branch must be +1 or -1")
        if not self.amplitude > 0.0:
            raise ParameterError("orbit amplitude must be positive")
        if not abs(self.mu) < 1.0:
            raise ParameterError("|mu| < 1 is needed for a monotone orbit phase")


def orbit_phase(o: HomoclinicOrbit, x):
    """``u(x) = kappa + x + mu sin x``; strictly increasing since ``|mu| < 1``."""
    return o.kappa + x + o.mu * np.sin(x)


def orbit_height(o: HomoclinicOrbit, x):
    return o.branch * o.amplitude * sech(orbit_phase(o, x))


def orbit_slope(o: HomoclinicOrbit, x):
    u = orbit_phase(o, x)
    return -o.branch * o.amplitude * sech(u) * np.tanh(u) * (1.0 + o.mu * np.cos(x))


def orbit_apex(o: HomoclinicOrbit) -> float:
    """The unique ``x`` with ``u(x) = 0``, where the orbit reaches its full height."""
    lo = -o.kappa - 2.0
    hi = -o.kappa + 2.0
    return float(brentq(lambda x: orbit_phase(o, x), lo, hi, xtol=1e-15))


def check_orbit_surface(o: HomoclinicOrbit, s: LiouvilleSurface) -> None:
    """Raise unless ``s`` is a perturbed-revolution strip with the orbit's ``mu``.

    The well amplitude of ``g`` is deliberately not compared with the orbit amplitude:
    a mismatch there is a legitimate (if inconsistent) configuration whose residual
    :func:`orbit_residual` reports.
    """
    if s.f.kind != "perturbed-revolution":
        raise ParameterError(f"orbit needs a perturbed-revolution x-factor, got {s.f.kind!r}")
    if s.f.mu != o.mu:
        raise ParameterError(f"surface mu={s.f.mu} does not match orbit mu={o.mu}")


def orbit_residual(o: HomoclinicOrbit, s: LiouvilleSurface, x):
    """``(dy/dx)^2 - g(y)/f(x)`` along the closed-form orbit; zero when ``g`` matches."""
    check_orbit_surface(o, s)
    y = orbit_height(o, x)
    dy = orbit_slope(o, x)
    return dy * dy - s.g.value(y) / s.f.value(x)


@dataclass
class SeparatrixSolution:
    """Numerical separatrix samples and the phase offset fitted from the start point."""

    x: np.ndarray
    y: np.ndarray
    slope: np.ndarray
    kappa: float
    apex_x: float | None


def solve_separatrix_ode(s: LiouvilleSurface, x0: float, y0: float, x_end: float,
                         h: float, direction: int = 1, tol: float = 1e-9) -> SeparatrixSolution:
    """Integrate ``dy/dx = +-sqrt(g(y)/f(x))`` from ``(x0, y0)`` with RK4.

    The square root has a turning point at the apex where ``g`` vanishes, so the
    equation is integrated in its regular second-order form
    ``y'' = g'(y)/(2f) - y' f'/(2f)`` with ``y'(x0) = direction * sqrt(g(y0)/f(x0))``;
    the branch switches sign by itself at the apex.  ``direction = +1`` means the
    orbit is rising at ``x0``.  The quantity ``f y'^2 - g`` is conserved by the exact
    flow and starts at zero.

    Only the upper branch is handled; ``0 < y0 < c`` where ``c`` is the root of ``g``.
    """
    if direction not in (1, -1):
        raise ParameterError("direction must be +1 or -1")
    if h <= 0.0:
        raise ParameterError("step must be positive")
    c = _well_root(s)
    if not 0.0 < y0 < c:
        raise ParameterError(f"start height {y0} must lie strictly inside (0, {c}); "
                             "at the apex the branch is ambiguous")
    f, g = s.f, s.g
    n = max(1, int(round(abs(x_end - x0) / h)))
    step = (x_end - x0) / n

    def rhs(x, z):
        fx = f.value(x)
        return np.array([z[1], g.d1(z[0]) / (2.0 * fx) - z[1] * f.d1(x) / (2.0 * fx)])

    z = np.array([y0, direction * np.sqrt(g.value(y0) / f.value(x0))])
    xs = x0 + step * np.arange(n + 1)
    out = np.empty((n + 1, 2))
    out[0] = z
    for k in range(n):
        z = rk4_step(rhs, xs[k], z, step)
        if not (-tol < z[0] <= c + tol):
            raise ParameterError(f"separatrix left (0, {c}] at x={xs[k + 1]:.6g} (y={z[0]:.3g})")
        out[k + 1] = z

    flips = np.flatnonzero(np.diff(np.sign(out[:, 1])) != 0)
    apex_x = None
    if flips.size:
        i = flips[0]
        # linear interpolation of the slope zero
        s0, s1 = out[i, 1], out[i + 1, 1]
        apex_x = float(xs[i] + (xs[i + 1] - xs[i]) * s0 / (s0 - s1))

    # rising means the phase u(x0) is negative
    mu = f.mu if f.kind == "perturbed-revolution" else 0.0
    u0 = -direction * np.arccosh(c / y0)
    kappa = float(u0 - x0 - mu * np.sin(x0))
    return SeparatrixSolution(xs, out[:, 0], out[:, 1], kappa, apex_x)


def _well_root(s: LiouvilleSurface) -> float:
    if s.g.kind == "quartic-well":
        return s.g.amplitude
    raise ParameterError(f"separatrix solver needs a quartic-well y-factor, got {s.g.kind!r}")
