"""Liouville metric factors ``(f(x) + g(y)) (dx^2 + dy^2)``.

A profile is one coordinate factor of the metric together with its first three
derivatives in closed form.  All evaluators accept scalars or numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, ParameterError

__all__ = [
    "SurfaceProfile",
    "PerturbedRevolution",
    "QuarticWell",
    "ConstantProfile",
    "CustomProfile",
    "LiouvilleSurface",
    "make_perturbed_revolution",
    "make_quartic_well",
    "make_constant",
    "derivative_selfcheck",
    "flat_torus",
    "perturbed_surface",
    "SELFCHECK_TOLERANCE",
]

TWO_PI = 2.0 * np.pi

# custom profiles are trusted only below this self-check error
SELFCHECK_TOLERANCE = 1e-6


class SurfaceProfile:
    """Base class for a metric factor with derivatives up to third order."""

    kind: str = "abstract"

    def value(self, t):
        raise NotImplementedError

    def d1(self, t):
        raise NotImplementedError

    def d2(self, t):
        raise NotImplementedError

    def d3(self, t):
        raise NotImplementedError

    def derivative(self, t, order: int):
        """Evaluate the derivative of the given order (0 returns the value)."""
        if order == 0:
            return self.value(t)
        if order == 1:
            return self.d1(t)
        if order == 2:
            return self.d2(t)
        if order == 3:
            return self.d3(t)
        raise ValueError(f"derivative order must be in 0..3, got {order}")

    def __call__(self, t):
        return self.value(t)


@dataclass(frozen=True)
class PerturbedRevolution(SurfaceProfile):
    """``f(x) = (1 + mu cos x)^-2``, the periodic perturbation of a flat factor."""

    mu: float
    kind: str = field(default="perturbed-revolution", init=False)

    def value(self, t):
        return (1.0 + self.mu * np.cos(t)) ** -2

    def d1(self, t):
        return 2.0 * self.mu * np.sin(t) * (1.0 + self.mu * np.cos(t)) ** -3

    def d2(self, t):
        mu = self.mu
        c = np.cos(t)
        return -2.0 * mu * (2.0 * mu * c * c - c - 3.0 * mu) * (1.0 + mu * c) ** -4

    def d3(self, t):
        mu = self.mu
        c = np.cos(t)
        num = 1.0 - 7.0 * mu * c + 4.0 * mu * mu * c * c - 12.0 * mu * mu
        return -2.0 * mu * np.sin(t) * num * (1.0 + mu * c) ** -5


@dataclass(frozen=True)
class QuarticWell(SurfaceProfile):
    """``g(y) = y^2 (1 - y^2 / c^2)``, induced by the separatrix ``y = c sech x``."""

    amplitude: float
    kind: str = field(default="quartic-well", init=False)

    def value(self, t):
        return t * t * (1.0 - t * t / self.amplitude**2)

    def d1(self, t):
        return 2.0 * t - 4.0 * t**3 / self.amplitude**2

    def d2(self, t):
        return 2.0 - 12.0 * t * t / self.amplitude**2

    def d3(self, t):
        return -24.0 * t / self.amplitude**2


@dataclass(frozen=True)
class ConstantProfile(SurfaceProfile):
    constant: float
    kind: str = field(default="constant", init=False)

    def value(self, t):
        return np.zeros_like(t, dtype=float) + self.constant

    def d1(self, t):
        return np.zeros_like(t, dtype=float)

    d2 = d1
    d3 = d1


@dataclass(frozen=True)
class CustomProfile(SurfaceProfile):
    """User-supplied evaluators.

    Use :func:`derivative_selfcheck` (or :meth:`validate`) before trusting one.
    """

    f0: Callable
    f1: Callable
    f2: Callable
    f3: Callable
    name: str = "custom"
    kind: str = field(default="custom", init=False)

    def value(self, t):
        return self.f0(t)

    def d1(self, t):
        return self.f1(t)

    def d2(self, t):
        return self.f2(t)

    def d3(self, t):
        return self.f3(t)

    def validate(self, grid, h: float = 1e-5, tol: float = SELFCHECK_TOLERANCE) -> float:
        """Raise :class:`ParameterError` unless all three derivatives pass the self-check."""
        worst = max(derivative_selfcheck(self, order, grid, h) for order in (1, 2, 3))
        if not worst < tol:
            raise ParameterError(
                f"custom profile {self.name!r} failed derivative self-check: "
                f"max relative error {worst:.3e} >= {tol:.1e}"
            )
        return worst


def make_perturbed_revolution(mu: float, allow_unsafe: bool = False) -> PerturbedRevolution:
    """Build ``f(x) = (1 + mu cos x)^-2``.

    The tail estimates only hold for ``0 < mu < 1/4``; other values (including the
    surface-of-revolution case ``mu = 0``) need ``allow_unsafe=True``.  Even then
    ``|mu| < 1`` is required so that ``f`` stays finite.
    """
    mu = float(mu)
    if not np.isfinite(mu):
        raise ParameterError(f"mu must be finite, got {mu}")
    if not allow_unsafe and not 0.0 < mu < 0.25:
        raise ParameterError(f"mu={mu} outside (0, 1/4); pass allow_unsafe=True to override")
    if abs(mu) >= 1.0:
        raise ParameterError(f"|mu| must be < 1 for a bounded profile, got {mu}")
    return PerturbedRevolution(mu)


def make_quartic_well(c: float) -> QuarticWell:
    c = float(c)
    if not (np.isfinite(c) and c > 0.0):
        raise ParameterError(f"quartic-well amplitude must be positive, got {c}")
    return QuarticWell(c)


def make_constant(value: float) -> ConstantProfile:
    return ConstantProfile(float(value))


def derivative_selfcheck(p: SurfaceProfile, order: int, grid, h: float) -> float:
    """Compare a closed-form derivative against a central difference of the order below.

    The error is measured in the sup norm over ``grid`` and made relative to the
    largest closed-form magnitude on the grid, so isolated zeros of the derivative do
    not blow it up.  Returns 0.0 when both sides vanish identically.
    """
    if order not in (1, 2, 3):
        raise ValueError(f"order must be 1, 2 or 3, got {order}")
    if not 0.0 < h <= 1e-2:
        raise ValueError(f"finite-difference step must lie in (0, 1e-2], got {h}")
    grid = np.asarray(grid, dtype=float).ravel()
    if grid.size == 0:
        raise ValueError("derivative self-check needs a non-empty grid")
    exact = np.asarray(p.derivative(grid, order), dtype=float)
    fd = (np.asarray(p.derivative(grid + h, order - 1), dtype=float)
          - np.asarray(p.derivative(grid - h, order - 1), dtype=float)) / (2.0 * h)
    scale = np.max(np.abs(exact))
    err = np.max(np.abs(exact - fd))
    if scale == 0.0:
        return float(err)
    return float(err / scale)


@dataclass(frozen=True)
class LiouvilleSurface:
    """A Liouville strip ``R x y_strip`` with conformal factor ``A = f(x) + g(y)``.

    Construction checks ``A > 0`` on a grid of step at most 1e-3 over one x-period and
    the whole strip.  Because ``A`` is separable the check reduces to the two 1-D minima.
    """

    f: SurfaceProfile
    g: SurfaceProfile
    y_strip: tuple[float, float] = (-1.0, 1.0)

    def __post_init__(self):
        lo, hi = self.y_strip
        if not lo < hi:
            raise ParameterError(f"empty coordinate strip {self.y_strip}")
        xs = np.linspace(0.0, TWO_PI, int(np.ceil(TWO_PI / 1e-3)) + 1)
        ys = np.linspace(lo, hi, int(np.ceil((hi - lo) / 1e-3)) + 1)
        a_min = np.min(self.f.value(xs)) + np.min(self.g.value(ys))
        if not a_min > 0.0:
            raise DomainError(f"conformal factor f + g is not positive on the strip (min {a_min:.3g})")

    def conformal_factor(self, x, y):
        return self.f.value(x) + self.g.value(y)

    def in_strip(self, y) -> bool:
        lo, hi = self.y_strip
        return bool(np.all((lo <= y) & (y <= hi)))


def flat_torus() -> LiouvilleSurface:
    return LiouvilleSurface(make_constant(1.0), make_constant(0.0))


def perturbed_surface(mu: float = 0.125, well: float = 1.0,
                      allow_unsafe: bool = False) -> LiouvilleSurface:
    """The perturbed-revolution torus ``f = (1 + mu cos x)^-2``, ``g = y^2 (1 - y^2/well^2)``."""
    return LiouvilleSurface(make_perturbed_revolution(mu, allow_unsafe), make_quartic_well(well),
                            (-well, well))
