"""Geodesic flow of a Liouville metric as a Hamiltonian system on the cotangent bundle.

With ``A = f(x) + g(y)`` the Hamiltonian is ``H = (p_x^2 + p_y^2) / (2A)`` and the flow
carries the second integral ``F = p_x^2 - 2 f H = (g p_x^2 - f p_y^2) / A``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DomainError, NonFiniteError, ParameterError
from .rk4 import rk4_step
from .surface import TWO_PI, LiouvilleSurface

__all__ = [
    "PhasePoint",
    "Trajectory",
    "HyperbolicityResult",
    "hamiltonian",
    "second_integral",
    "clairaut_constant",
    "vector_field",
    "unit_phase_point",
    "integrate_geodesic",
    "integrate_geodesics",
    "hyperbolicity_check",
]


@dataclass(frozen=True)
class PhasePoint:
    x: float
    y: float
    p_x: float
    p_y: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.p_x, self.p_y], dtype=float)

    @classmethod
    def from_array(cls, z) -> "PhasePoint":
        x, y, px, py = (float(v) for v in np.asarray(z, dtype=float).ravel()[:4])
        return cls(x, y, px, py)

    @property
    def angle(self) -> float:
        """Direction ``theta`` with ``tan(theta) = p_x / p_y``."""
        return float(np.arctan2(self.p_x, self.p_y))


def _split(z):
    if isinstance(z, PhasePoint):
        return z.x, z.y, z.p_x, z.p_y
    z = np.asarray(z, dtype=float)
    return z[..., 0], z[..., 1], z[..., 2], z[..., 3]


def _factor(s: LiouvilleSurface, x, y):
    A = s.f.value(x) + s.g.value(y)
    if np.any(~(A > 0.0)):
        raise DomainError("conformal factor A <= 0 along the geodesic")
    return A


def hamiltonian(s: LiouvilleSurface, z):
    x, y, px, py = _split(z)
    return (px * px + py * py) / (2.0 * _factor(s, x, y))


def second_integral(s: LiouvilleSurface, z):
    """``F = p_x^2 - f(x) |p|^2 / A``.

    This is ``p_x^2 - f H`` for the metric norm ``H = |p|^2 / A``; with the halved
    Hamiltonian used here it reads ``p_x^2 - 2 f H``.
    """
    x, _, px, _ = _split(z)
    return px * px - 2.0 * s.f.value(x) * hamiltonian(s, z)


def clairaut_constant(s: LiouvilleSurface, z):
    """``a = F / (2H) = (g p_x^2 - f p_y^2) / (p_x^2 + p_y^2)``.

    Along a geodesic with ``x' != 0`` this gives ``(dy/dx)^2 = (g - a) / (f + a)``.
    """
    H = hamiltonian(s, z)
    if np.any(H == 0.0):
        raise ParameterError("Clairaut constant undefined at zero momentum")
    return second_integral(s, z) / (2.0 * H)


def vector_field(s: LiouvilleSurface, z) -> np.ndarray:
    """Hamilton's equations ``(x', y', p_x', p_y')``; batched over leading axes of ``z``."""
    x, y, px, py = _split(z)
    A = _factor(s, x, y)
    p2 = px * px + py * py
    w = p2 / (2.0 * A * A)
    return np.stack([px / A, py / A, w * s.f.d1(x), w * s.g.d1(y)], axis=-1)


def unit_phase_point(s: LiouvilleSurface, x: float, y: float, theta: float) -> PhasePoint:
    """Phase point on ``H = 1`` heading in direction ``theta`` (``tan theta = p_x / p_y``)."""
    A = float(_factor(s, x, y))
    r = np.sqrt(2.0 * A)
    return PhasePoint(float(x), float(y), float(r * np.sin(theta)), float(r * np.cos(theta)))


@dataclass
class Trajectory:
    """Uniformly sampled discrete geodesic flow.

    ``states`` has shape ``(n, 4)`` with columns ``x, y, p_x, p_y``; ``H`` and ``F`` are
    the energy and second integral at each sample.  ``truncated`` is set when the
    orbit left the coordinate strip; samples stop at the last in-strip state.
    """

    t: np.ndarray
    states: np.ndarray
    h: float
    H: np.ndarray
    F: np.ndarray
    truncated: bool = False

    @property
    def H0(self) -> float:
        return float(self.H[0])

    @property
    def F0(self) -> float:
        return float(self.F[0])

    @property
    def x(self):
        return self.states[:, 0]

    @property
    def y(self):
        return self.states[:, 1]

    @property
    def p_x(self):
        return self.states[:, 2]

    @property
    def p_y(self):
        return self.states[:, 3]

    @property
    def final(self) -> PhasePoint:
        return PhasePoint.from_array(self.states[-1])


def integrate_geodesics(s: LiouvilleSurface, starts: Sequence, t_end: float, h: float,
                        stride: int = 1) -> list[Trajectory]:
    """Fixed-step RK4 integration of several geodesics at once.

    Every start is advanced on the same time grid; a trajectory that leaves
    ``s.y_strip`` is frozen at its last in-strip sample and flagged as truncated.
    """
    if not (h > 0.0 and t_end > 0.0):
        raise ParameterError("step and final time must be positive")
    if stride < 1:
        raise ParameterError("output stride must be >= 1")
    z = np.array([_split_row(p) for p in starts], dtype=float).reshape(-1, 4)
    m = z.shape[0]
    if np.any((z[:, 2] == 0.0) & (z[:, 3] == 0.0)):
        raise ParameterError("initial momentum must be non-zero")
    n_steps = max(1, int(round(t_end / h)))
    h = t_end / n_steps
    lo, hi = s.y_strip
    if np.any((z[:, 1] < lo) | (z[:, 1] > hi)):
        raise ParameterError("initial point lies outside the coordinate strip")

    def rhs(_t, zz):
        return vector_field(s, zz)

    n_out = n_steps // stride + 1
    samples = np.empty((n_out, m, 4))
    samples[0] = z
    last = np.zeros(m, dtype=int)
    active = np.ones(m, dtype=bool)
    for k in range(1, n_steps + 1):
        if not active.any():
            break
        idx = np.flatnonzero(active)
        nxt = rk4_step(rhs, 0.0, z[idx], h)
        if not np.all(np.isfinite(nxt)):
            raise NonFiniteError(f"non-finite state after step {k}")
        left = (nxt[:, 1] < lo) | (nxt[:, 1] > hi)
        z[idx[~left]] = nxt[~left]
        active[idx[left]] = False
        if k % stride == 0:
            row = k // stride
            samples[row] = z
            last[active] = row

    out = []
    for j in range(m):
        rows = samples[: last[j] + 1, j]
        out.append(Trajectory(
            t=np.arange(rows.shape[0]) * (h * stride),
            states=rows.copy(),
            h=h,
            H=np.asarray(hamiltonian(s, rows)),
            F=np.asarray(second_integral(s, rows)),
            truncated=not active[j],
        ))
    return out


def _split_row(p):
    return p.as_array() if isinstance(p, PhasePoint) else np.asarray(p, dtype=float)


def integrate_geodesic(s: LiouvilleSurface, z0, t_end: float, h: float,
                       stride: int = 1) -> Trajectory:
    return integrate_geodesics(s, [z0], t_end, h, stride)[0]


class HyperbolicityResult(NamedTuple):
    hyperbolic: bool
    margin: float


def hyperbolicity_check(s: LiouvilleSurface, n: int = 1000,
                        axis_tol: float = 1e-12) -> HyperbolicityResult:
    """Test ``g'(0) = 0`` and ``g''(0) > f'(x)^2 / f(x) - f''(x)`` for every ``x`` on the axis.

    The inequality is required uniformly on an ``n``-point grid over one period, which
    makes the curvature of the axis negative everywhere.  ``margin`` is the minimum of
    ``g''(0) - f'^2/f + f''`` over the grid; the inequality is strict.
    """
    xs = np.linspace(0.0, TWO_PI, n, endpoint=False)
    f0, f1, f2 = s.f.value(xs), s.f.d1(xs), s.f.d2(xs)
    margin = float(np.min(s.g.d2(0.0) - f1 * f1 / f0 + f2))
    on_axis = abs(float(s.g.d1(0.0))) <= axis_tol
    return HyperbolicityResult(bool(on_axis and margin > 0.0), margin)
