"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or configuration error,
3 numerical non-convergence, 4 geodesic left the coordinate strip.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path

import numpy as np

from .config import RunConfig, read_config_file
from .csvio import CsvTable, format_number
from .curvature import curvature_fields
from .errors import ConvergenceError, DomainError, MelnikovError, ParameterError
from .geodesic import integrate_geodesic, unit_phase_point
from .melnikov import convergence_study, kappa_sweep, tail_bound, window_integral_rk4
from .reference import REFERENCE_WINDOWS
from .surface import flat_torus
from .verification import FAULTS, run_suite

log = logging.getLogger(__name__)

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_NONCONVERGENCE, EXIT_TRUNCATED = 0, 1, 2, 3, 4

DEFAULT_STEPS = (0.2, 0.1, 0.05, 0.025, 0.0125)
# window on which the h^4 quadrature error sits above the rounding floor
CONVERGE_WINDOW = 2.0

_COMMON = {
    "mu": ("--mu", float),
    "kappa": ("--kappa", float),
    "amplitude": ("--amplitude", float),
    "well": ("--well", float),
    "factor": ("--factor", int),
    "window": ("--window", float),
    "step": ("--step", float),
    "bound_variant": ("--bound-variant", str),
    "out": ("--out", str),
    "precision": ("--precision", int),
}


class UsageError(Exception):
    pass


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _common_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("run configuration")
    for dest, (flag, typ) in _COMMON.items():
        kw = {"choices": ("lemma", "table")} if dest == "bound_variant" else {}
        g.add_argument(flag, dest=dest, type=typ, default=None, **kw)
    g.add_argument("--allow-unsafe-mu", dest="allow_unsafe_mu", action="store_true", default=None,
                   help="accept mu outside (0, 1/4), e.g. the surface of revolution mu=0")
    g.add_argument("--config", type=Path, default=None, help="key=value file; flags override it")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="liouville-melnikov", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", parents=[common], help="window integral and tail bound against L")
    p.add_argument("--windows", type=_float_list, default=list(REFERENCE_WINDOWS))

    p = sub.add_parser("sweep", parents=[common], help="window integral as a function of kappa")
    p.add_argument("--kappa-min", type=float, default=-2 * math.pi)
    p.add_argument("--kappa-max", type=float, default=2 * math.pi)
    p.add_argument("--points", type=int, default=129)
    p.add_argument("--workers", type=int, default=None)

    p = sub.add_parser("converge", parents=[common], help="quadrature error against step size")
    p.add_argument("--steps", type=_float_list, default=list(DEFAULT_STEPS))

    p = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    p.add_argument("--inject-fault", choices=FAULTS, default=None, help=argparse.SUPPRESS)

    p = sub.add_parser("geodesic", parents=[common], help="integrate one unit-speed geodesic")
    p.add_argument("--x0", type=float, default=0.0)
    p.add_argument("--y0", type=float, default=0.0)
    p.add_argument("--theta0", type=float, default=math.pi / 2,
                   help="direction with tan(theta) = p_x / p_y")
    p.add_argument("--t-end", type=float, default=10.0)
    p.add_argument("--stride", type=int, default=100)
    p.add_argument("--flat", action="store_true", help="use the flat torus instead")

    p = sub.add_parser("curvature-grid", parents=[common], help="curvature and gradient on a grid")
    p.add_argument("--nx", type=int, default=64)
    p.add_argument("--ny", type=int, default=33)
    return parser


def config_from_args(args) -> RunConfig:
    values = {}
    if args.config is not None:
        values.update(read_config_file(args.config))
    for dest in list(_COMMON) + ["allow_unsafe_mu"]:
        v = getattr(args, dest, None)
        if v is not None:
            values[dest] = v
    return RunConfig(**values)


def cmd_table(cfg: RunConfig, windows) -> CsvTable:
    s, o = cfg.surface(), cfg.orbit()
    t = CsvTable(["L", "A_L", "bound_lemma", "bound_table"], precision=cfg.precision)
    for L in windows:
        a = cfg.factor * window_integral_rk4(s, o, L, cfg.step)
        t.add(L, a, tail_bound(cfg.kappa, L, "lemma").value, tail_bound(cfg.kappa, L, "table").value)
    return t


def plot_script(csv_name: str, mu: float) -> str:
    return (
        "# gnuplot script; kappa is stored in radians and plotted in multiples of pi\n"
        "set datafile separator ','\n"
        "set key off\n"
        "set xlabel 'kappa / pi'\n"
        "set ylabel 'A_L(kappa)'\n"
        f"set title 'Melnikov integral against kappa, mu = {format_number(mu)}'\n"
        f"plot '{csv_name}' every ::1 using ($1/pi):2 with lines\n"
    )


def cmd_sweep(cfg: RunConfig, kappa_min, kappa_max, n, workers=None) -> CsvTable:
    if n < 2 or not kappa_max > kappa_min:
        raise UsageError("sweep needs --points >= 2 and kappa-max > kappa-min")
    sw = kappa_sweep(cfg.surface(), kappa_min, kappa_max, n, cfg.window, cfg.step,
                     cfg.amplitude, workers)
    t = CsvTable(["kappa", "value"], precision=cfg.precision)
    for k, v in zip(sw.kappa, sw.value):
        t.add(float(k), cfg.factor * float(v))
    return t


def cmd_converge(cfg: RunConfig, steps, window: float | None = None) -> CsvTable:
    steps = sorted(steps, reverse=True)
    if len(steps) < 3 or len(set(steps)) != len(steps):
        raise UsageError("converge needs at least three distinct step sizes")
    L = CONVERGE_WINDOW if window is None else window
    st = convergence_study(cfg.surface(), cfg.orbit(), L, steps)
    t = CsvTable(["h", "abs_error"], precision=cfg.precision)
    for h, e in zip(st.h, st.error):
        t.add(float(h), float(e))
    t.comments.append(f"window = {format_number(L)}")
    t.comments.append(f"slope = {format_number(st.slope, 6)}")
    return t


def cmd_verify(cfg: RunConfig, fault=None, stream=None) -> int:
    stream = stream or sys.stdout
    checks = run_suite(cfg, fault)
    stream.write(f"{'check':<28s} {'measured':>12s} {'threshold':>12s} status\n")
    for c in checks:
        stream.write(c.line() + "\n")
    failed = [c.name for c in checks if not c.skipped and not c.passed]
    stream.write(f"# {len(checks) - len(failed)}/{len(checks)} passed\n")
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_geodesic(cfg: RunConfig, x0, y0, theta0, t_end, stride=100, flat=False):
    if not t_end > 0:
        raise UsageError("--t-end must be positive")
    s = flat_torus() if flat else cfg.surface()
    z0 = unit_phase_point(s, x0, y0, theta0)
    tr = integrate_geodesic(s, z0, t_end, cfg.step, stride)
    t = CsvTable(["t", "x", "y", "p_x", "p_y", "H", "F"], precision=cfg.precision)
    for k in range(tr.t.size):
        t.add(float(tr.t[k]), *map(float, tr.states[k]), float(tr.H[k]), float(tr.F[k]))
    if tr.truncated:
        t.comments.append(f"truncated: left the strip {s.y_strip} after t = "
                          f"{format_number(tr.t[-1], cfg.precision)}")
    return t, tr.truncated


def cmd_curvature_grid(cfg: RunConfig, nx, ny) -> CsvTable:
    if nx < 1 or ny < 1:
        raise UsageError("grid sizes must be positive")
    s = cfg.surface()
    xs = np.linspace(0.0, 2 * math.pi, nx, endpoint=False)
    ys = np.linspace(s.y_strip[0], s.y_strip[1], ny)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    A, K, Kx, Ky = curvature_fields(s, X, Y)
    t = CsvTable(["x", "y", "A", "K", "K_x", "K_y"], precision=cfg.precision)
    for idx in np.ndindex(X.shape):
        t.add(float(X[idx]), float(Y[idx]), float(A[idx]), float(K[idx]), float(Kx[idx]),
              float(Ky[idx]))
    return t


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = config_from_args(args)
        if args.command == "table":
            cmd_table(cfg, args.windows).write(cfg.out)
        elif args.command == "sweep":
            t = cmd_sweep(cfg, args.kappa_min, args.kappa_max, args.points, args.workers)
            t.write(cfg.out)
            if cfg.out:
                out = Path(cfg.out)
                out.with_suffix(".gp").write_text(plot_script(out.name, cfg.mu), encoding="utf-8")
        elif args.command == "converge":
            cmd_converge(cfg, args.steps, args.window).write(cfg.out)
        elif args.command == "verify":
            return cmd_verify(cfg, args.inject_fault)
        elif args.command == "geodesic":
            t, truncated = cmd_geodesic(cfg, args.x0, args.y0, args.theta0, args.t_end,
                                        args.stride, args.flat)
            t.write(cfg.out)
            if truncated:
                return EXIT_TRUNCATED
        elif args.command == "curvature-grid":
            cmd_curvature_grid(cfg, args.nx, args.ny).write(cfg.out)
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except (UsageError, ParameterError, DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MelnikovError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
