"""Melnikov-integral certification for Ricci-flow perturbations of Liouville tori."""

from .config import RESOLVED_AMPLITUDE, RESOLVED_FACTOR, RunConfig
from .curvature import (CurvatureSample, axis_curvature_scan, curvature_fd_check,
                        curvature_fields, gauss_curvature)
from .errors import (ConvergenceError, DomainError, MelnikovError, NonFiniteError,
                     ParameterError)
from .geodesic import (PhasePoint, Trajectory, clairaut_constant, hamiltonian,
                       hyperbolicity_check, integrate_geodesic, integrate_geodesics,
                       second_integral, unit_phase_point, vector_field)
from .melnikov import (BoundVariant, MelnikovResult, TailBound, Verdict, convergence_study,
                       integrand, kappa_sweep, melnikov_value, resolve_table_configuration,
                       tail_bound, window_integral_oracle, window_integral_rk4)
from .orbit import (HomoclinicOrbit, orbit_apex, orbit_height, orbit_residual, orbit_slope,
                    solve_separatrix_ode)
from .surface import (LiouvilleSurface, derivative_selfcheck, flat_torus,
                      make_constant, make_perturbed_revolution, make_quartic_well,
                      perturbed_surface)

__version__ = "0.1.0"
