"""One-step and two-step integration maps, plus fixed-step driving.

All one-step methods here act on a phase state (t, psi, phi) and report
how many right-hand-side evaluations they spent.  The asynchronous
leapfrog family advances phi through kicks of the form
phi += 2*lam*(F - phi); the post-kick phi values are kept on the step
outcome so jerk diagnostics need no extra evaluations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Tuple

from .core import (
    BlowUpError,
    ConvergenceError,
    OdeSystem,
    PhaseState,
    SecondOrderSystem,
    TrajectoryRecord,
    TrajectoryStatus,
    Vec,
    add_scaled,
    all_finite,
    vector_norm,
)
from .diagnostics import kappa, step_jerk

RK2_MIDPOINT = 0.0
RK2_RALSTON = 1.0 / 3.0
RK2_HEUN = 0.5


class StepOutcome(NamedTuple):
    """Result of one integration step.

    ``substep_phis`` holds the post-kick phi values of kick-structured
    methods (one for ALF, two for DALF/ADALF, empty otherwise); ``fevals``
    is the exact number of rhs evaluations performed.
    """

    state: PhaseState
    substep_phis: Tuple[Vec, ...]
    fevals: int


def alf_step(sys: OdeSystem, s: PhaseState, h: float, lam: float = 1.0) -> StepOutcome:
    """One asynchronous-leapfrog step of size h (one rhs evaluation).

    Drift half a step, kick phi against a fresh derivative at the midpoint,
    drift the other half.  With lam = 1 the kick is phi -> 2*F - phi and
    the map is exactly reversible; lam < 1 damps the kick (kept only for
    the relaxed stability-region studies).
    """
    _check_h(h)
    if not 0.0 < lam <= 1.0:
        raise ValueError(f"relaxation parameter must be in (0, 1], got {lam}")
    t, psi, phi = s
    tau = 0.5 * h
    psi_mid = add_scaled(psi, tau, phi)
    f = sys.rhs(t + tau, psi_mid)
    two_lam = 2.0 * lam
    phi_out = tuple(p + two_lam * (fi - p) for p, fi in zip(phi, f))
    psi_out = add_scaled(psi_mid, tau, phi_out)
    return StepOutcome(PhaseState(t + h, psi_out, phi_out), (phi_out,), 1)


def _densified_kernel(sys: OdeSystem, s: PhaseState, h: float):
    """Fused pair of half-size leapfrog sub-steps (shared by DALF/ADALF).

    The trailing drift of the first sub-step and the leading drift of the
    second collapse into one mid drift, so the position path is fixed here
    once and both variants reuse it unchanged.
    """
    t, psi, phi = s
    quarter = 0.25 * h
    psi_a = add_scaled(psi, quarter, phi)
    f1 = sys.rhs(t + quarter, psi_a)
    phi_1 = tuple(p + 2.0 * (fi - p) for p, fi in zip(phi, f1))
    psi_b = add_scaled(psi_a, 0.5 * h, phi_1)
    f2 = sys.rhs(t + 0.75 * h, psi_b)
    phi_2 = tuple(p + 2.0 * (fi - p) for p, fi in zip(phi_1, f2))
    psi_out = add_scaled(psi_b, quarter, phi_2)
    return t + h, psi_out, phi_1, phi_2


def dalf_step(sys: OdeSystem, s: PhaseState, h: float) -> StepOutcome:
    """Densified asynchronous leapfrog: two chained half-size kicks.

    Equals the composition of two plain steps of size h/2; symplectic
    and reversible.  Two rhs evaluations.
    """
    _check_h(h)
    t_out, psi_out, phi_1, phi_2 = _densified_kernel(sys, s, h)
    return StepOutcome(PhaseState(t_out, psi_out, phi_2), (phi_1, phi_2), 2)


def adalf_step(sys: OdeSystem, s: PhaseState, h: float) -> StepOutcome:
    """Averaged densified leapfrog: densified step, final phi averaged.

    Positions match the densified step exactly (the averaging happens
    after the last drift); the averaged phi breaks reversibility, damps
    kick-to-kick oscillation, and buys the enlarged stability region.
    """
    _check_h(h)
    t_out, psi_out, phi_1, phi_2 = _densified_kernel(sys, s, h)
    phi_avg = tuple(0.5 * (p1 + p2) for p1, p2 in zip(phi_1, phi_2))
    return StepOutcome(PhaseState(t_out, psi_out, phi_avg), (phi_1, phi_2), 2)


@dataclass(frozen=True)
class MechanicalSystem:
    """x'' = force(t, x, v); the force may depend on the velocity."""

    dim: int
    force: Callable[[float, Vec, Vec], Vec]
    label: str = ""


class Mech2State(NamedTuple):
    """Second-order averaged-leapfrog state: positions x, velocities v,
    and their carried derivative estimates (w, a)."""

    t: float
    x: Vec
    v: Vec
    w: Vec
    a: Vec


def init_mech2_state(msys: MechanicalSystem, t0: float, x0, v0) -> Mech2State:
    """w := v0 and a := force(t0, x0, v0), one force evaluation."""
    x0 = tuple(x0)
    v0 = tuple(v0)
    a0 = tuple(msys.force(t0, x0, v0))
    if not all_finite(a0):
        raise BlowUpError(f"force not finite at initial state t={t0}")
    return Mech2State(t0, x0, v0, v0, a0)


def adalf2_step(msys: MechanicalSystem, st: Mech2State, h: float) -> Mech2State:
    """Averaged densified leapfrog for mechanical systems.

    Line-by-line second-order form of the averaged step on the stacked
    state psi = (x, v), phi = (w, a); matches the stacked first-order
    update to the last bit.  Two force evaluations.
    """
    _check_h(h)
    t, x, v, w, a = st
    quarter = 0.25 * h
    x = add_scaled(x, quarter, w)
    v = add_scaled(v, quarter, a)
    w = tuple(wi + 2.0 * (vi - wi) for wi, vi in zip(w, v))
    f = msys.force(t + quarter, x, v)
    a = tuple(ai + 2.0 * (fi - ai) for ai, fi in zip(a, f))
    w1, a1 = w, a
    x = add_scaled(x, 0.5 * h, w)
    v = add_scaled(v, 0.5 * h, a)
    w = tuple(wi + 2.0 * (vi - wi) for wi, vi in zip(w, v))
    f = msys.force(t + 0.75 * h, x, v)
    a = tuple(ai + 2.0 * (fi - ai) for ai, fi in zip(a, f))
    x = add_scaled(x, quarter, w)
    v = add_scaled(v, quarter, a)
    w = tuple(0.5 * (wi + w1i) for wi, w1i in zip(w, w1))
    a = tuple(0.5 * (ai + a1i) for ai, a1i in zip(a, a1))
    return Mech2State(t + h, x, v, w, a)


def rk2_step(sys: OdeSystem, s: PhaseState, h: float, a1: float = RK2_MIDPOINT) -> StepOutcome:
    """Second-order explicit Runge-Kutta, reformulated to carry phi.

    The first stage consumes the stored phi instead of re-evaluating the
    derivative at the step start; the step ends by refreshing phi at the
    new state so the next step (and the step controller) can use it.  A
    trajectory of accepted states is unchanged by this bookkeeping.  a1
    selects the member: 0 midpoint, 1/3 Ralston, 1/2 Heun.  Two rhs
    evaluations.
    """
    _check_h(h)
    if not 0.0 <= a1 < 1.0:
        raise ValueError(f"rk2 parameter a1 must be in [0, 1), got {a1}")
    t, psi, phi = s
    b = 1.0 - a1
    c = 1.0 / (2.0 * b)
    ch = c * h
    k2 = sys.rhs(t + ch, add_scaled(psi, ch, phi))
    psi_out = tuple(p + h * (a1 * f1 + b * f2) for p, f1, f2 in zip(psi, phi, k2))
    t_out = t + h
    phi_out = tuple(sys.rhs(t_out, psi_out))
    return StepOutcome(PhaseState(t_out, psi_out, phi_out), (), 2)


def stormer_verlet_step(sys2: SecondOrderSystem, s: PhaseState, h: float) -> StepOutcome:
    """Stormer-Verlet (position form) for velocity-independent forces.

    State is (t, q, v) packed as a phase state; the acceleration is
    evaluated once, at the drift midpoint.
    """
    _check_h(h)
    t, q, v = s
    tau = 0.5 * h
    q_mid = add_scaled(q, tau, v)
    f = sys2.accel(t + tau, q_mid)
    v_out = add_scaled(v, h, f)
    q_out = add_scaled(q_mid, tau, v_out)
    return StepOutcome(PhaseState(t + h, q_out, v_out), (), 1)


# --- classic two-step leapfrog -------------------------------------------


class TimePoint(NamedTuple):
    t: float
    psi: Vec


class LeapfrogPair(NamedTuple):
    """State of the classic leapfrog method: two (t, psi) points."""

    first: TimePoint
    second: TimePoint


def classic_lf_step(sys: OdeSystem, pair: LeapfrogPair) -> LeapfrogPair:
    """((t0,psi0),(t1,psi1)) -> ((t1,psi1),(t2,psi2)) with t2 = 2*t1 - t0
    and psi2 = psi0 + (t2 - t0) * F(t1, psi1).  One rhs evaluation."""
    (t0, psi0), (t1, psi1) = pair
    if t0 == t1:
        raise ValueError("leapfrog pair needs two distinct times")
    t2 = 2.0 * t1 - t0
    psi2 = add_scaled(psi0, t2 - t0, sys.rhs(t1, psi1))
    return LeapfrogPair(TimePoint(t1, psi1), TimePoint(t2, psi2))


def lf_init(
    sys: OdeSystem,
    t0: float,
    psi0,
    t1: float,
    mode: str = "euler",
    tol: float = 1e-12,
    max_iter: int = 50,
    oracle: Optional[Callable[[float], Vec]] = None,
) -> LeapfrogPair:
    """Build the starting pair for a classic leapfrog trajectory.

    euler        one explicit Euler step (one rhs evaluation)
    trapezoidal  fixed-point iteration of the implicit trapezoidal rule,
                 started from psi0, stopped when successive iterates
                 differ by less than tol
    exact        psi1 := oracle(t1) from a known exact solution
    """
    psi0 = tuple(psi0)
    if t1 == t0:
        raise ValueError("initialization needs t1 != t0")
    dt = t1 - t0
    if mode == "euler":
        psi1 = add_scaled(psi0, dt, sys.rhs(t0, psi0))
    elif mode == "trapezoidal":
        f0 = sys.rhs(t0, psi0)
        psi1 = psi0
        for _ in range(max_iter):
            f1 = sys.rhs(t1, psi1)
            nxt = tuple(p + 0.5 * dt * (a + b) for p, a, b in zip(psi0, f0, f1))
            if vector_norm([a - b for a, b in zip(nxt, psi1)]) < tol:
                psi1 = nxt
                break
            psi1 = nxt
        else:
            raise ConvergenceError(
                f"trapezoidal initialization did not converge in {max_iter} iterations",
                last_iterate=psi1,
            )
    elif mode == "exact":
        if oracle is None:
            raise ValueError("exact initialization needs an oracle evaluator")
        psi1 = tuple(oracle(t1))
    else:
        raise ValueError(f"unknown initialization mode {mode!r}")
    return LeapfrogPair(TimePoint(t0, psi0), TimePoint(t1, psi1))


def lf_restart(pair: LeapfrogPair, sys: OdeSystem, new_tau: float) -> LeapfrogPair:
    """Restart a leapfrog trajectory at the pair's later point with a new
    step size, via one Euler step."""
    if new_tau == 0.0:
        raise ValueError("restart step size must be nonzero")
    t_p, psi_p = pair.second
    psi_next = add_scaled(psi_p, new_tau, sys.rhs(t_p, psi_p))
    return LeapfrogPair(TimePoint(t_p, psi_p), TimePoint(t_p + new_tau, psi_next))


def reverse_pair(pair: LeapfrogPair) -> LeapfrogPair:
    """Motion reversal: swap the two entries.  Involutive."""
    return LeapfrogPair(pair.second, pair.first)


# --- uniform stepper interface and fixed-step driving ---------------------

STEPPER_NAMES = ("alf", "dalf", "adalf", "rk2", "sv")


def make_stepper(name: str, lam: float = 1.0, a1: float = RK2_MIDPOINT):
    """Bind a method name and its parameters into step(sys, state, h).

    The returned callable carries ``label``, ``phi_carrying`` (False only
    for Stormer-Verlet, which has no re-initializable phi) and
    ``kick_lam`` attributes for drivers.
    """
    if name == "alf":
        if not 0.0 < lam <= 1.0:
            raise ValueError(f"relaxation parameter must be in (0, 1], got {lam}")

        def step(sys, s, h):
            return alf_step(sys, s, h, lam)

        label = "alf" if lam == 1.0 else f"alf(lam={lam:g})"
        kick_lam = lam
    elif name == "dalf":
        step = dalf_step
        label = "dalf"
        kick_lam = 1.0
    elif name == "adalf":
        step = adalf_step
        label = "adalf"
        kick_lam = 1.0
    elif name == "rk2":
        if not 0.0 <= a1 < 1.0:
            raise ValueError(f"rk2 parameter a1 must be in [0, 1), got {a1}")

        def step(sys, s, h):
            return rk2_step(sys, s, h, a1)

        label = f"rk2(a1={a1:g})"
        kick_lam = 1.0
    elif name == "sv":
        step = stormer_verlet_step
        label = "sv"
        kick_lam = 1.0
    else:
        raise ValueError(f"unknown method {name!r}; expected one of {STEPPER_NAMES}")

    def bound(sys, s, h, _inner=step):
        return _inner(sys, s, h)

    bound.label = label
    bound.phi_carrying = name != "sv"
    bound.kick_lam = kick_lam
    return bound


def _step_quality(phi_before: Vec, outcome: StepOutcome, lam: float) -> float:
    if outcome.substep_phis:
        return step_jerk(phi_before, outcome, lam)
    return kappa(phi_before, outcome.state.phi)


def drive_fixed(
    step,
    sys,
    state0: PhaseState,
    h: float,
    n_steps: int,
    fevals0: int = 0,
) -> TrajectoryRecord:
    """Iterate a stepper n_steps times at fixed h.

    A non-finite state (or a domain escape inside the rhs) truncates the
    record and marks it blown up instead of raising; finite-time escape is
    expected behavior for some systems.  ``fevals0`` charges the cost of
    initializing phi to the total.
    """
    _check_h(h)
    lam = getattr(step, "kick_lam", 1.0)
    states = [state0]
    jerks = []
    fevals = fevals0
    status = TrajectoryStatus.COMPLETED
    state = state0
    for _ in range(n_steps):
        try:
            outcome = step(sys, state, h)
        except (BlowUpError, OverflowError, ZeroDivisionError):
            status = TrajectoryStatus.BLEW_UP
            break
        fevals += outcome.fevals
        if not (all_finite(outcome.state.psi) and all_finite(outcome.state.phi)):
            status = TrajectoryStatus.BLEW_UP
            break
        jerks.append(_step_quality(state.phi, outcome, lam))
        state = outcome.state
        states.append(state)
    n_done = len(states) - 1
    return TrajectoryRecord(
        states=tuple(states),
        step_sizes=(h,) * n_done,
        jerk_values=tuple(jerks[:n_done]),
        feval_count=fevals,
        status=status,
    )


def _check_h(h: float) -> None:
    if h == 0.0 or not math.isfinite(h):
        raise ValueError(f"step size must be nonzero and finite, got {h}")
