import numpy as np
import pytest

from liouville_melnikov.geodesic import unit_phase_point
from liouville_melnikov.surface import flat_torus, perturbed_surface


def trapped_unit_starts(s, n, seed):
    """Unit-level starts whose Clairaut constant lies in (0, g(y0)), so |y| stays inside (0, 1)."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        x0 = rng.uniform(0.0, 2.0 * np.pi)
        y0 = rng.uniform(0.3, 0.85) * rng.choice([-1.0, 1.0])
        ratio = rng.uniform(0.0, 0.8 * s.g.value(y0) / s.f.value(x0))  # p_y^2 / p_x^2
        theta = np.arctan2(1.0, np.sqrt(ratio)) * rng.choice([-1.0, 1.0])
        out.append(unit_phase_point(s, x0, y0, theta))
    return out


@pytest.fixture(scope="session")
def surface():
    return perturbed_surface(0.125, 1.0)


@pytest.fixture(scope="session")
def flat():
    return flat_torus()


@pytest.fixture(scope="session")
def revolution():
    return perturbed_surface(0.0, 1.0, allow_unsafe=True)
