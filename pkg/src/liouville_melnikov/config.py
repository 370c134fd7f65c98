"""Run configuration and its plain-text ``key=value`` file format."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import ParameterError
from .melnikov import BoundVariant
from .orbit import HomoclinicOrbit
from .surface import LiouvilleSurface, perturbed_surface

__all__ = ["RunConfig", "RESOLVED_AMPLITUDE", "RESOLVED_FACTOR", "read_config_file"]

# frozen output of resolve_table_configuration against the reference A_L(1) column;
# tests/test_melnikov.py re-derives them
RESOLVED_AMPLITUDE = 0.5
RESOLVED_FACTOR = 1


@dataclass(frozen=True)
class RunConfig:
    """All knobs of a run.

    ``amplitude`` is the height of the separatrix ``amplitude * sech(u)``; ``well`` is
    the root of ``g(y) = y^2 (1 - y^2/well^2)``.  The surface defaults to ``well = 1``;
    the amplitude and factor default to the resolved reproduction of the reference table.
    """

    mu: float = 0.125
    kappa: float = 1.0
    amplitude: float = RESOLVED_AMPLITUDE
    well: float = 1.0
    factor: int = RESOLVED_FACTOR
    window: float = 10.0
    step: float = 1e-3
    bound_variant: BoundVariant = BoundVariant.TABLE
    out: str | None = None
    precision: int = 9
    allow_unsafe_mu: bool = False

    def __post_init__(self):
        for name in ("mu", "kappa", "amplitude", "well", "window", "step"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ParameterError(f"{name} must be a finite number, got {v!r}")
        if not self.allow_unsafe_mu and not 0.0 < self.mu < 0.25:
            raise ParameterError(f"mu={self.mu} outside (0, 1/4); use --allow-unsafe-mu")
        if self.factor not in (1, 2):
            raise ParameterError(f"factor must be 1 or 2, got {self.factor}")
        if not (self.amplitude > 0 and self.well > 0 and self.window > 0 and self.step > 0):
            raise ParameterError("amplitude, well, window and step must be positive")
        if not 1 <= self.precision <= 17:
            raise ParameterError("precision must be between 1 and 17 significant digits")
        object.__setattr__(self, "bound_variant", BoundVariant(self.bound_variant))

    def surface(self) -> LiouvilleSurface:
        return perturbed_surface(self.mu, self.well, allow_unsafe=self.allow_unsafe_mu)

    def orbit(self, kappa: float | None = None) -> HomoclinicOrbit:
        return HomoclinicOrbit(self.kappa if kappa is None else kappa, self.mu, self.amplitude)

    def replace(self, **changes) -> "RunConfig":
        return dataclasses.replace(self, **changes)


_FIELD_TYPES = {
    "mu": float, "kappa": float, "amplitude": float, "well": float, "factor": int,
    "window": float, "step": float, "bound_variant": str, "out": str, "precision": int,
    "allow_unsafe_mu": lambda v: v.strip().lower() in ("1", "true", "yes", "on"),
}


def read_config_file(path) -> dict:
    """Parse ``key=value`` lines; ``#`` starts a comment.  Keys may use dashes."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _FIELD_TYPES:
            raise ParameterError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[key] = _FIELD_TYPES[key](value)
        except ValueError as exc:
            raise ParameterError(f"{path}:{lineno}: bad value for {key}: {exc}") from None
    return values
