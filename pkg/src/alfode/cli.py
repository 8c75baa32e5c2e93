"""Command-line front end: configure runs, emit plot-ready CSV data.

Every output file starts with one `#` metadata line holding the fully
resolved configuration, then a header row, then comma-separated data rows
with floats at 17 significant digits (round-trip exact).  Exit status 0
on success; 2 usage error, 3 blow-up, 4 step underflow, 5 oracle
non-convergence.
"""

from __future__ import annotations

import argparse
import cmath
import math
import sys
from typing import List, Optional, Sequence, Tuple

from . import __version__, diagnostics, kepler, stability, systems
from .core import (
    ConvergenceError,
    OdeSystem,
    PhaseState,
    StepUnderflowError,
    TrajectoryRecord,
    TrajectoryStatus,
    init_phase_state,
)
from .diagnostics import kappa
from .integrators import (
    RK2_HEUN,
    RK2_MIDPOINT,
    RK2_RALSTON,
    LeapfrogPair,
    classic_lf_step,
    drive_fixed,
    lf_init,
    make_stepper,
)
from .stepcontrol import config_for_span, drive_adaptive

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BLOWUP = 3
EXIT_UNDERFLOW = 4
EXIT_ORACLE = 5

_STATUS_EXIT = {
    TrajectoryStatus.COMPLETED: EXIT_OK,
    TrajectoryStatus.BLEW_UP: EXIT_BLOWUP,
    TrajectoryStatus.STEP_UNDERFLOW: EXIT_UNDERFLOW,
}

# canonical method sets, in presentation order
ORDER_METHODS = ("alf", "dalf", "adalf", "rk2-midpoint", "rk2-ralston", "rk2-heun", "sv")
AUTOSTEP_METHODS = ("dalf", "adalf", "rk2-midpoint", "rk2-ralston", "rk2-heun")
NIP_METHODS = ("alf", "dalf", "adalf", "rk2-midpoint", "sv")

_RK2_VARIANTS = {
    "rk2-midpoint": RK2_MIDPOINT,
    "rk2-ralston": RK2_RALSTON,
    "rk2-heun": RK2_HEUN,
}


class UsageError(ValueError):
    pass


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def _write_csv(path: str, meta: dict, header: Sequence[str], rows) -> None:
    with open(path, "w") as fh:
        fh.write("# " + " ".join(f"{k}={_fmt(v)}" for k, v in meta.items()) + "\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def resolve_method(label: str, lam: float = 1.0, a1: Optional[float] = None):
    """Map a method label to a bound stepper; rk2 names carry their a1."""
    if label in _RK2_VARIANTS:
        return make_stepper("rk2", a1=_RK2_VARIANTS[label])
    if label == "rk2":
        return make_stepper("rk2", a1=RK2_MIDPOINT if a1 is None else a1)
    if label in ("alf", "dalf", "adalf", "sv"):
        return make_stepper(label, lam=lam)
    raise UsageError(f"unknown method {label!r}")


def _method_list(spec: str, default: Sequence[str]) -> List[str]:
    if spec == "all":
        return list(default)
    return [m.strip() for m in spec.split(",") if m.strip()]


def parse_eps_sweep(spec: str) -> List[float]:
    """a:s:b triples, endpoints inclusive up to rounding."""
    try:
        a, s, b = (float(p) for p in spec.split(":"))
    except ValueError as exc:
        raise UsageError(f"bad sweep spec {spec!r}, expected a:s:b") from exc
    if s <= 0.0 or b < a:
        raise UsageError(f"bad sweep spec {spec!r}")
    n = int(round((b - a) / s))
    values = [round(a + k * s, 12) for k in range(n + 1)]
    return [v for v in values if v <= b + 1e-12]


# --- shared experiment runners (used by the commands and the test suite) ---


def kepler_fixed_run(
    method: str,
    eps: float,
    n_per_rev: int,
    periods: int,
    lam: float = 1.0,
    a1: Optional[float] = None,
) -> TrajectoryRecord:
    """Fixed-step Kepler run from the perihelion, h = period/n_per_rev.

    Stormer-Verlet runs on the second-order form; its record is repacked
    to psi = (x, v) so the Kepler diagnostics apply uniformly.
    """
    t_p = kepler.period(eps)
    h = t_p / n_per_rev
    start = kepler.perihelion_state(eps)
    n_steps = n_per_rev * periods
    if method == "sv":
        state0 = PhaseState(0.0, (start.x,), (start.v,))
        rec = drive_fixed(resolve_method("sv"), systems.kepler_accel(), state0, h, n_steps)
        return diagnostics.radial_pairs_record(rec)
    sys_k = systems.kepler_system()
    state0 = init_phase_state(sys_k, 0.0, (start.x, start.v))
    return drive_fixed(resolve_method(method, lam=lam, a1=a1), sys_k, state0, h, n_steps, fevals0=1)


def kepler_adaptive_run(
    method: str,
    eps: float,
    n_per_rev0: int = 32,
    periods: int = 1,
    kink_crit: float = 1e-3,
    frac: float = 0.2,
) -> TrajectoryRecord:
    """Kappa-controlled Kepler run over whole periods from the perihelion.

    The initial step comes from the eccentricity-normalized step count, so
    runs across a sweep start comparably demanding.
    """
    t_p = kepler.period(eps)
    t_end = periods * t_p
    h0 = t_p / kepler.steps_per_rev(eps, n_per_rev0)
    cfg = config_for_span(t_end, h0, kink_crit=kink_crit, frac=frac)
    sys_k = systems.kepler_system()
    start = kepler.perihelion_state(eps)
    state0 = init_phase_state(sys_k, 0.0, (start.x, start.v))
    return drive_adaptive(resolve_method(method), sys_k, state0, t_end, cfg, fevals0=1)


def autostep_sweep(
    eps_values: Sequence[float],
    methods: Sequence[str],
    n_per_rev0: int = 32,
    periods: int = 1,
    kink_crit: float = 1e-3,
    frac: float = 0.2,
    max_samples: Optional[int] = 256,
):
    """Adaptive runs over an eccentricity sweep; one result row per run."""
    rows = []
    for eps in eps_values:
        for method in methods:
            rec = kepler_adaptive_run(method, eps, n_per_rev0, periods, kink_crit, frac)
            err = (
                diagnostics.mean_trajectory_error(rec, eps, max_samples=max_samples)
                if rec.status == TrajectoryStatus.COMPLETED
                else math.nan
            )
            rows.append(
                {
                    "eps": eps,
                    "method": method,
                    "mean_error": err,
                    "total_fevals": rec.feval_count,
                    "accepted_steps": rec.n_steps,
                    "min_h": min(rec.step_sizes) if rec.step_sizes else math.nan,
                    "max_h": max(rec.step_sizes) if rec.step_sizes else math.nan,
                    "max_kappa": max(rec.jerk_values) if rec.jerk_values else 0.0,
                    "status": rec.status.value,
                }
            )
    return rows


# --- trajectory command ----------------------------------------------------


def _system_setup(args):
    """Resolve --system into (OdeSystem, psi0, oracle psi(t))."""
    name = args.system
    if name == "tanh":
        sys_o = systems.tanh_system()
        psi0 = (0.0,)
    elif name == "arctan":
        sys_o = systems.arctan_blowup_system()
        psi0 = (0.0,)
    elif name == "linear":
        sys_o = systems.linear_test_system(_parse_omega(args.omega))
        psi0 = (1.0, 0.0)
    elif name == "kepler":
        sys_o = systems.kepler_system()
        start = kepler.perihelion_state(args.eps)
        psi0 = (start.x, start.v)
    else:
        raise UsageError(f"unknown system {name!r}")
    if args.psi0 is not None:
        psi0 = tuple(float(p) for p in args.psi0.split(","))
        if len(psi0) != sys_o.dim:
            raise UsageError(f"--psi0 needs {sys_o.dim} components for {name}")
    return sys_o, psi0, _exact_oracle(name, args, psi0)


def _exact_oracle(name, args, psi0):
    """Exact solution through (t=0, psi0), for lf exact initialization."""
    if name == "tanh":
        return lambda t: (systems.tanh_exact(t, psi0[0]),)
    if name == "arctan":
        return lambda t: (systems.arctan_exact(t, psi0[0]),)
    if name == "linear":
        om = _parse_omega(args.omega)

        def linear_exact(t):
            z = complex(psi0[0], psi0[1]) * cmath.exp(om * t)
            return (z.real, z.imag)

        return linear_exact
    if name == "kepler":
        s0 = kepler.KeplerState(0.0, psi0[0], psi0[1])

        def kepler_exact(t):
            out = kepler.exact_evolve(s0, t, args.acc)
            return (out.x, out.v)

        return kepler_exact
    raise UsageError(f"no oracle for system {name!r}")


def _parse_omega(spec: str) -> complex:
    try:
        re, im = (float(p) for p in spec.split(":"))
    except ValueError as exc:
        raise UsageError(f"bad --omega {spec!r}, expected re:im") from exc
    return complex(re, im)


def _trajectory_grid(args) -> Tuple[float, int]:
    if args.system == "kepler" and args.h is None:
        if args.n_per_rev is None:
            raise UsageError("kepler runs need --h or --n-per-rev")
        h = kepler.period(args.eps) / args.n_per_rev
        if args.periods is not None:
            return h, args.n_per_rev * args.periods
        if args.t_end is None:
            raise UsageError("need --periods or --t-end")
        return h, max(1, round(args.t_end / h))
    if args.h is None:
        raise UsageError("need --h")
    if args.t_end is None:
        raise UsageError("need --t-end")
    return args.h, max(1, round(args.t_end / args.h))


def _bezier_samples(method: str, s_in: PhaseState, s_out: PhaseState, m: int):
    """Interior samples of a step's continuous representation.

    The plain step is one parabola; the densified/averaged steps are two
    chained parabolas whose interior control points are reconstructed from
    the recorded endpoint states.
    """
    h = s_out.t - s_in.t
    if method == "alf":
        pieces = [diagnostics.step_control_points(s_in, s_out)]
    else:
        quarter = 0.25 * h
        psi_a = tuple(p + quarter * f for p, f in zip(s_in.psi, s_in.phi))
        if method == "dalf":
            phi2 = s_out.phi
            psi_mid = tuple(p - quarter * f for p, f in zip(s_out.psi, phi2))
            phi1 = tuple((pm - pa) * 2.0 / h for pm, pa in zip(psi_mid, psi_a))
        else:  # adalf: state phi is the kick average
            phi_avg = s_out.phi
            phi1 = tuple(
                (po - pa - 0.5 * h * pv) * 4.0 / h
                for po, pa, pv in zip(s_out.psi, psi_a, phi_avg)
            )
            psi_mid = tuple(pa + 0.5 * h * f for pa, f in zip(psi_a, phi1))
        t0, t_mid = s_in.t, s_in.t + 0.5 * h
        pieces = [
            ((t0, s_in.psi), (t0 + quarter, psi_a), (t_mid, psi_mid)),
            (
                (t_mid, psi_mid),
                (t_mid + quarter, tuple(p + quarter * f for p, f in zip(psi_mid, phi1))),
                (s_out.t, s_out.psi),
            ),
        ]
    out = []
    for j in range(m):
        s = (j + 1) / (m + 1)
        if len(pieces) == 1:
            t, psi = diagnostics.bezier_sample(*pieces[0], s)
        elif s < 0.5:
            t, psi = diagnostics.bezier_sample(*pieces[0], 2.0 * s)
        else:
            t, psi = diagnostics.bezier_sample(*pieces[1], 2.0 * s - 1.0)
        out.append(t)
        out.extend(psi)
    return out


def cmd_trajectory(args) -> int:
    method = args.method
    if method == "sv" and args.system != "kepler":
        raise UsageError("stormer-verlet runs only on the second-order kepler system")
    if args.bezier_samples and method not in ("alf", "dalf", "adalf"):
        raise UsageError("--bezier-samples applies to the leapfrog-family methods only")
    sys_o, psi0, oracle = _system_setup(args)
    h, n_steps = _trajectory_grid(args)

    if method == "lf":
        return _trajectory_lf(args, sys_o, psi0, oracle, h, n_steps)

    if method == "sv":
        state0 = PhaseState(0.0, (psi0[0],), (psi0[1],))
        rec = drive_fixed(resolve_method("sv"), systems.kepler_accel(), state0, h, n_steps)
        per_step, init_cost = 1, 0
        rec_pairs = diagnostics.radial_pairs_record(rec)
    else:
        step = resolve_method(method, lam=args.lam, a1=args.a1)
        state0 = init_phase_state(sys_o, 0.0, psi0)
        per_step = 1 if method == "alf" else 2
        init_cost = 1
        rec = drive_fixed(step, sys_o, state0, h, n_steps, fevals0=init_cost)
        rec_pairs = rec

    meta = _meta(args, h=h, n_steps=n_steps, status=rec.status.value, feval_count=rec.feval_count)
    dim = len(rec.states[0].psi)
    header = (
        ["step", "t"]
        + [f"psi{c}" for c in range(dim)]
        + [f"phi{c}" for c in range(dim)]
        + ["h", "jerk", "cum_fevals"]
    )
    kepler_extras = args.system == "kepler"
    if kepler_extras:
        header += ["x_exact", "v_exact", "denergy"]
        x0, v0 = rec_pairs.states[0].psi
        h0_energy = kepler.hamiltonian(v0, x0)
        start = kepler.KeplerState(0.0, x0, v0)
    if args.bezier_samples:
        for j in range(args.bezier_samples):
            header += [f"bez{j}_t"] + [f"bez{j}_psi{c}" for c in range(dim)]
    header.append("status")

    rows = []
    cum = init_cost
    for i in range(rec.n_steps):
        st = rec.states[i + 1]
        cum += per_step
        row = [i + 1, st.t, *st.psi, *st.phi, rec.step_sizes[i], rec.jerk_values[i], cum]
        if kepler_extras:
            xp, vp = rec_pairs.states[i + 1].psi
            ref = kepler.exact_evolve(start, st.t, args.acc)
            row += [ref.x, ref.v, kepler.hamiltonian(vp, xp) - h0_energy]
        if args.bezier_samples:
            row += _bezier_samples(method, rec.states[i], st, args.bezier_samples)
        row.append(rec.status.value)
        rows.append(row)
    _write_csv(args.out, meta, header, rows)
    return _STATUS_EXIT[rec.status]


def _trajectory_lf(args, sys_o: OdeSystem, psi0, oracle, h: float, n_steps: int) -> int:
    """Classic two-step leapfrog trajectory.

    The emitted phi columns are the backward difference slopes
    (psi_i - psi_{i-1}) / h, the velocity-like quantities the pair
    trajectory implies; jerk is the kappa mismatch of successive slopes.
    """
    pair = lf_init(
        sys_o,
        0.0,
        psi0,
        h,
        mode=args.lf_init,
        oracle=oracle if args.lf_init == "exact" else None,
    )
    dim = sys_o.dim
    status = TrajectoryStatus.COMPLETED
    rows = []
    slope_prev = None
    cum = 1
    points = [pair.first, pair.second]
    for _ in range(n_steps - 1):
        try:
            pair = classic_lf_step(sys_o, pair)
        except (OverflowError, ZeroDivisionError):
            status = TrajectoryStatus.BLEW_UP
            break
        cum += 1
        if not all(math.isfinite(c) for c in pair.second.psi):
            status = TrajectoryStatus.BLEW_UP
            break
        points.append(pair.second)
    kepler_extras = args.system == "kepler"
    if kepler_extras:
        x0, v0 = psi0
        h0_energy = kepler.hamiltonian(v0, x0)
        start = kepler.KeplerState(0.0, x0, v0)
    header = (
        ["step", "t"]
        + [f"psi{c}" for c in range(dim)]
        + [f"slope{c}" for c in range(dim)]
        + ["h", "jerk", "cum_fevals"]
    )
    if kepler_extras:
        header += ["x_exact", "v_exact", "denergy"]
    header.append("status")
    cum = 1
    for i, pt in enumerate(points[1:], start=1):
        prev = points[i - 1]
        slope = tuple((a - b) / (pt.t - prev.t) for a, b in zip(pt.psi, prev.psi))
        jerk = kappa(slope_prev, slope) if slope_prev is not None else 0.0
        slope_prev = slope
        cum += 1
        row = [i, pt.t, *pt.psi, *slope, h, jerk, cum]
        if kepler_extras:
            ref = kepler.exact_evolve(start, pt.t, args.acc)
            row += [ref.x, ref.v, kepler.hamiltonian(pt.psi[1], pt.psi[0]) - h0_energy]
        row.append(status.value)
        rows.append(row)
    meta = _meta(args, h=h, n_steps=n_steps, status=status.value, feval_count=cum)
    _write_csv(args.out, meta, header, rows)
    return _STATUS_EXIT[status]


# --- other commands --------------------------------------------------------


def cmd_stability(args) -> int:
    window = _parse_window(args.window)
    nx, ny = _parse_grid(args.grid)
    step = resolve_method(args.method, lam=args.lam, a1=args.a1)
    grid = stability.stability_region_scan(step, window, nx, ny)
    meta = _meta(args, window=args.window, nx=nx, ny=ny)
    rows = []
    for iy in range(ny):
        for ix in range(nx):
            z = grid.center(ix, iy)
            rows.append([z.real, z.imag, int(grid.cell(ix, iy))])
    _write_csv(args.out, meta, ["re", "im", "stable"], rows)
    return EXIT_OK


def cmd_order(args) -> int:
    methods = _method_list(args.method, ORDER_METHODS)
    rows = []
    for method in methods:
        hs, errs = [], []
        for k in range(4):
            n = args.n_per_rev * 2 ** k
            rec = kepler_fixed_run(method, args.eps, n, args.periods, a1=args.a1)
            if rec.status != TrajectoryStatus.COMPLETED:
                raise StepUnderflowError(f"{method} did not complete at n_per_rev={n}")
            hs.append(kepler.period(args.eps) / n)
            errs.append(diagnostics.mean_trajectory_error(rec, args.eps, max_samples=args.max_samples))
        report = diagnostics.order_fit(hs, errs)
        for h, e in zip(report.step_sizes, report.mean_errors):
            rows.append([method, h, e, report.slope])
    meta = _meta(args, ladder="h, h/2, h/4, h/8")
    _write_csv(args.out, meta, ["method", "h", "mean_error", "slope"], rows)
    return EXIT_OK


def cmd_nip(args) -> int:
    methods = _method_list(args.method, NIP_METHODS)
    rows = []
    for method in methods:
        rec = kepler_fixed_run(method, args.eps, args.n_per_rev, args.periods, a1=args.a1)
        points = diagnostics.nip_trajectory(rec, args.eps, args.acc)
        for p in points:
            rows.append([method, p.t, p.dx_rel, p.dv_rel])
    meta = _meta(args)
    _write_csv(args.out, meta, ["method", "t", "dx_rel", "dv_rel"], rows)
    return EXIT_OK


def cmd_autostep(args) -> int:
    if args.eps_sweep:
        eps_values = parse_eps_sweep(args.eps_sweep)
    else:
        eps_values = [args.eps]
    methods = _method_list(args.method, AUTOSTEP_METHODS)
    for m in methods:
        if m == "sv":
            raise UsageError("stormer-verlet carries no re-initializable phi; not usable under step control")
    rows = autostep_sweep(
        eps_values,
        methods,
        n_per_rev0=args.n_per_rev,
        periods=args.periods,
        kink_crit=args.kink_crit,
        frac=args.frac,
        max_samples=args.max_samples,
    )
    meta = _meta(args, eps_values=";".join(_fmt(e) for e in eps_values))
    header = [
        "eps", "method", "mean_error", "total_fevals", "accepted_steps",
        "min_h", "max_h", "max_kappa", "status",
    ]
    _write_csv(args.out, meta, header, [[r[k] for k in header] for r in rows])
    worst = EXIT_OK
    for r in rows:
        worst = max(worst, _STATUS_EXIT[TrajectoryStatus(r["status"])])
    return worst


def cmd_kepler_exact(args) -> int:
    t_end = args.t_end if args.t_end is not None else kepler.period(args.eps)
    start = kepler.perihelion_state(args.eps)
    n = args.samples
    rows = []
    for i in range(n):
        t = t_end * i / (n - 1) if n > 1 else 0.0
        st = kepler.exact_evolve(start, t, args.acc)
        rows.append([st.t, st.x, st.v, kepler.hamiltonian(st.v, st.x)])
    meta = _meta(args, t_end=t_end)
    _write_csv(args.out, meta, ["t", "x", "v", "H"], rows)
    return EXIT_OK


def _meta(args, **extra) -> dict:
    meta = {"command": args.command}
    skip = {"func", "command"}
    for k, v in sorted(vars(args).items()):
        if k not in skip and v is not None:
            meta[k.replace("_", "-")] = v
    meta.update(extra)
    meta["alfode"] = __version__
    return meta


def _parse_window(spec: str):
    try:
        x0, x1, y0, y1 = (float(p) for p in spec.split(":"))
    except ValueError as exc:
        raise UsageError(f"bad --window {spec!r}, expected x0:x1:y0:y1") from exc
    return (x0, x1, y0, y1)


def _parse_grid(spec: str):
    try:
        nx, ny = (int(p) for p in spec.split(":"))
    except ValueError as exc:
        raise UsageError(f"bad --grid {spec!r}, expected nx:ny") from exc
    return nx, ny


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="alfode",
        description="Asynchronous-leapfrog integrator experiments; emits plot-ready CSV.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, methods_help):
        p.add_argument("--method", default="all", help=methods_help)
        p.add_argument("--a1", type=float, default=None, help="rk2 family parameter in [0,1)")
        p.add_argument("--lambda", dest="lam", type=float, default=1.0, help="alf relaxation in (0,1]")
        p.add_argument("--out", required=True, help="output CSV path")

    p = sub.add_parser("trajectory", help="fixed-step trajectory data")
    p.add_argument("--method", required=True, choices=["alf", "dalf", "adalf", "lf", "rk2", "sv"])
    p.add_argument("--a1", type=float, default=None)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--system", required=True, choices=["tanh", "arctan", "linear", "kepler"])
    p.add_argument("--eps", type=float, default=0.15, help="kepler eccentricity")
    p.add_argument("--omega", default="0:1", help="linear system omega as re:im")
    p.add_argument("--psi0", default=None, help="override initial state, comma separated")
    p.add_argument("--h", type=float, default=None)
    p.add_argument("--n-per-rev", type=int, default=None)
    p.add_argument("--periods", type=int, default=None)
    p.add_argument("--t-end", type=float, default=None)
    p.add_argument("--lf-init", default="euler", choices=["euler", "trapezoidal", "exact"])
    p.add_argument("--bezier-samples", type=int, default=0, help="continuous-output samples per step")
    p.add_argument("--acc", type=float, default=kepler.KEPLER_ACC_DEFAULT)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_trajectory)

    p = sub.add_parser("stability", help="absolute-stability region grid")
    p.add_argument("--method", required=True, choices=["alf", "dalf", "adalf", "rk2"])
    p.add_argument("--a1", type=float, default=None)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--window", required=True, help="x0:x1:y0:y1 in the h*omega plane")
    p.add_argument("--grid", required=True, help="nx:ny cells")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("order", help="convergence-order study on the kepler oscillator")
    add_common(p, "all or comma list of " + ",".join(ORDER_METHODS))
    p.add_argument("--eps", type=float, default=0.01)
    p.add_argument("--n-per-rev", type=int, default=32, help="coarsest steps per revolution")
    p.add_argument("--periods", type=int, default=2)
    p.add_argument("--max-samples", type=int, default=None)
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("nip", help="numerical-interaction-picture paths")
    add_common(p, "all or comma list of " + ",".join(NIP_METHODS))
    p.add_argument("--eps", type=float, default=0.15)
    p.add_argument("--n-per-rev", type=int, default=32)
    p.add_argument("--periods", type=int, default=16)
    p.add_argument("--acc", type=float, default=kepler.KEPLER_ACC_DEFAULT)
    p.set_defaults(func=cmd_nip)

    p = sub.add_parser("autostep", help="kappa-controlled runs over an eccentricity sweep")
    add_common(p, "all or comma list of " + ",".join(AUTOSTEP_METHODS))
    p.add_argument("--eps", type=float, default=0.15)
    p.add_argument("--eps-sweep", default=None, help="a:s:b inclusive sweep of eccentricities")
    p.add_argument("--n-per-rev", type=int, default=32, help="sets h_init via the normalized step count")
    p.add_argument("--periods", type=int, default=1)
    p.add_argument("--kink-crit", type=float, default=1e-3)
    p.add_argument("--frac", type=float, default=0.2)
    p.add_argument("--max-samples", type=int, default=256)
    p.set_defaults(func=cmd_autostep)

    p = sub.add_parser("kepler-exact", help="exact oscillator samples (t, x, v, H)")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--t-end", type=float, default=None)
    p.add_argument("--samples", type=int, default=65)
    p.add_argument("--acc", type=float, default=kepler.KEPLER_ACC_DEFAULT)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_kepler_exact)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StepUnderflowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNDERFLOW
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ORACLE


if __name__ == "__main__":
    sys.exit(main())
