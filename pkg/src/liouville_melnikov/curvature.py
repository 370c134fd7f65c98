"""Gaussian curvature of a Liouville metric and its coordinate gradient."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .surface import TWO_PI, LiouvilleSurface

__all__ = [
    "CurvatureSample",
    "curvature_fields",
    "gauss_curvature",
    "curvature_fd_check",
    "axis_curvature_scan",
]


@dataclass(frozen=True)
class CurvatureSample:
    x: float
    y: float
    A: float
    K: float
    K_x: float
    K_y: float


def curvature_fields(s: LiouvilleSurface, x, y):
    """Vectorised ``(A, K, K_x, K_y)`` at broadcast-compatible ``x`` and ``y``.

    Uses the closed forms for an isothermal metric ``A (dx^2 + dy^2)``::

        K   = (f'^2 + g'^2) / (2 A^3) - (f'' + g'') / (2 A^2)
        K_x = (-f''' A^2 + 2 f' g'' A + 4 f' f'' A - 3 f' g'^2 - 3 f'^3) / (2 A^4)
        K_y = (-g''' A^2 + 2 f'' g' A + 4 g' g'' A - 3 f'^2 g' - 3 g'^3) / (2 A^4)
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    f, g = s.f, s.g
    f0, f1, f2, f3 = f.value(x), f.d1(x), f.d2(x), f.d3(x)
    g0, g1, g2, g3 = g.value(y), g.d1(y), g.d2(y), g.d3(y)
    A = f0 + g0
    if np.any(~(A > 0.0)):
        bad = np.argwhere(np.broadcast_to(~(A > 0.0), A.shape))[0]
        raise DomainError(f"conformal factor A <= 0 at sample index {tuple(bad)}")
    A2 = A * A
    K = (f1 * f1 + g1 * g1) / (2.0 * A2 * A) - (f2 + g2) / (2.0 * A2)
    K_x = (-f3 * A2 + 2.0 * f1 * g2 * A + 4.0 * f1 * f2 * A
           - 3.0 * f1 * g1 * g1 - 3.0 * f1**3) / (2.0 * A2 * A2)
    K_y = (-g3 * A2 + 2.0 * f2 * g1 * A + 4.0 * g1 * g2 * A
           - 3.0 * f1 * f1 * g1 - 3.0 * g1**3) / (2.0 * A2 * A2)
    return A, K, K_x, K_y


def gauss_curvature(s: LiouvilleSurface, x: float, y: float) -> CurvatureSample:
    A, K, K_x, K_y = curvature_fields(s, x, y)
    return CurvatureSample(float(x), float(y), float(A), float(K), float(K_x), float(K_y))


def curvature_fd_check(s: LiouvilleSurface, grid, h: float = 1e-5) -> float:
    """Largest relative mismatch between the analytic gradient and central differences of ``K``.

    ``grid`` is a sequence of ``(x, y)`` pairs.  Each component is normalised by the
    largest analytic magnitude of that component on the grid; a component that is
    identically zero is compared absolutely.
    """
    if not 0.0 < h <= 1e-3:
        raise ValueError(f"finite-difference step must lie in (0, 1e-3], got {h}")
    pts = np.asarray(grid, dtype=float).reshape(-1, 2)
    if pts.shape[0] == 0:
        raise ValueError("curvature check needs a non-empty grid")
    x, y = pts[:, 0], pts[:, 1]
    _, _, K_x, K_y = curvature_fields(s, x, y)
    fd_x = (curvature_fields(s, x + h, y)[1] - curvature_fields(s, x - h, y)[1]) / (2.0 * h)
    fd_y = (curvature_fields(s, x, y + h)[1] - curvature_fields(s, x, y - h)[1]) / (2.0 * h)
    worst = 0.0
    for exact, fd in ((K_x, fd_x), (K_y, fd_y)):
        scale = np.max(np.abs(exact))
        err = np.max(np.abs(exact - fd))
        worst = max(worst, float(err / scale) if scale > 0.0 else float(err))
    return worst


def axis_curvature_scan(s: LiouvilleSurface, n: int = 1000) -> tuple[float, float]:
    """Min and max of ``K(x, 0)`` over ``n`` uniform samples of one period in ``x``."""
    if n < 2:
        raise ValueError("axis scan needs at least two samples")
    xs = np.linspace(0.0, TWO_PI, n, endpoint=False)
    K = curvature_fields(s, xs, 0.0)[1]
    return float(np.min(K)), float(np.max(K))
