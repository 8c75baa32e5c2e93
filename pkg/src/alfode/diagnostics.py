"""Error and quality metrics: jerk, interaction picture, order, Bezier output.

The "numerical interaction picture" maps every computed state back to the
initial time with the exact flow; a perfect integrator would map everything
to the origin, so the length and shape of the resulting path is a
fingerprint of the integrator's error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence, Tuple

from . import kepler
from .core import PhaseState, TrajectoryRecord, Vec, vector_norm

KAPPA_TINY = 1e-300


def kappa(a: Sequence[float], b: Sequence[float]) -> float:
    """Dimensionless mismatch ||a - b|| / (||a|| + ||b|| + tiny), in [0, 1].

    Zero iff a == b; one for opposite vectors.  The tiny guard keeps the
    all-zero case at zero instead of 0/0.
    """
    if len(a) != len(b):
        raise ValueError("kappa needs vectors of equal length")
    diff = vector_norm([ai - bi for ai, bi in zip(a, b)])
    return diff / (vector_norm(a) + vector_norm(b) + KAPPA_TINY)


def step_jerk(phi_start: Vec, outcome, lam: float = 1.0) -> float:
    """Mean kick mismatch of one step of a kick-structured method.

    Each kick phi += 2*lam*(F - phi) compares a fresh derivative F with the
    carried phi; the kappa value of that pair measures how far the step ran
    in "jerky mode".  F is recovered from the stored post-kick phi values,
    so no extra rhs evaluations are needed.  One kick for a plain
    asynchronous-leapfrog step, two for the densified/averaged forms.
    """
    phis = outcome.substep_phis
    if not phis:
        raise ValueError("step outcome carries no kick data")
    inv2lam = 1.0 / (2.0 * lam)
    total = 0.0
    pre = phi_start
    for post in phis:
        f = tuple(p + (q - p) * inv2lam for p, q in zip(pre, post))
        total += kappa(f, pre)
        pre = post
    return total / len(phis)


def phi_defect(sys, state: PhaseState) -> Vec:
    """Carried-derivative defect phi - F(t, psi); zero at initialization.

    Costs one rhs evaluation.
    """
    f = sys.rhs(state.t, state.psi)
    return tuple(p - fi for p, fi in zip(state.phi, f))


class NipPoint(NamedTuple):
    t: float
    dx_rel: float
    dv_rel: float


def _relative_scales(eps: float) -> Tuple[float, float]:
    x_min, x_max = kepler.x_range(eps)
    v_span = 2.0 * kepler.v_extreme(eps)
    if v_span == 0.0:
        raise ValueError("interaction-picture normalization needs eps > 0")
    return x_max - x_min, v_span


def nip_trajectory(
    traj: TrajectoryRecord,
    eps: float,
    acc: float = kepler.KEPLER_ACC_DEFAULT,
    evolve=kepler.exact_evolve,
) -> Tuple[NipPoint, ...]:
    """Interaction-picture path of a Kepler trajectory.

    Each state (t, x, v) is back-evolved exactly to the trajectory's start
    time, the initial state is subtracted, and the differences are scaled
    by the orbit's x and v ranges.
    """
    x_span, v_span = _relative_scales(eps)
    t0 = traj.states[0].t
    x0, v0 = traj.states[0].psi
    points = []
    for st in traj.states:
        if st.t == t0:
            back = kepler.KeplerState(t0, st.psi[0], st.psi[1])
        else:
            back = evolve(kepler.KeplerState(st.t, st.psi[0], st.psi[1]), t0, acc)
        points.append(NipPoint(st.t, (back.x - x0) / x_span, (back.v - v0) / v_span))
    return tuple(points)


def nip_path_length(points: Sequence[NipPoint]) -> float:
    """Polyline length of an interaction-picture path (in relative coords)."""
    total = 0.0
    for p, q in zip(points, points[1:]):
        total += math.hypot(q.dx_rel - p.dx_rel, q.dv_rel - p.dv_rel)
    return total


def mean_trajectory_error(
    traj: TrajectoryRecord,
    eps: float,
    acc: float = kepler.KEPLER_ACC_DEFAULT,
    max_samples: Optional[int] = None,
) -> float:
    """Mean relative-coordinate deviation from the exact state at equal times.

    Deviations use the same normalization as the interaction picture.  With
    ``max_samples`` the mean runs over an evenly strided subset of states,
    which keeps long high-eccentricity runs affordable.
    """
    x_span, v_span = _relative_scales(eps)
    start = kepler.KeplerState(traj.states[0].t, traj.states[0].psi[0], traj.states[0].psi[1])
    states = traj.states
    if max_samples is not None and len(states) > max_samples:
        stride = (len(states) - 1) / (max_samples - 1)
        states = [states[round(i * stride)] for i in range(max_samples)]
    total = 0.0
    for st in states:
        ref = start if st.t == start.t else kepler.exact_evolve(start, st.t, acc)
        total += math.hypot((st.psi[0] - ref.x) / x_span, (st.psi[1] - ref.v) / v_span)
    return total / len(states)


@dataclass(frozen=True)
class OrderReport:
    step_sizes: Tuple[float, ...]
    mean_errors: Tuple[float, ...]
    slope: float


def order_fit(step_sizes: Sequence[float], mean_errors: Sequence[float]) -> OrderReport:
    """Least-squares slope of log2(error) against log2(h)."""
    if len(step_sizes) != len(mean_errors) or len(step_sizes) < 3:
        raise ValueError("order fit needs >= 3 matched (h, error) pairs")
    if any(h <= 0.0 for h in step_sizes):
        raise ValueError("step sizes must be positive")
    if any(e <= 0.0 for e in mean_errors):
        raise ValueError("errors must be positive (exact reproduction breaks the fit)")
    xs = [math.log2(h) for h in step_sizes]
    ys = [math.log2(e) for e in mean_errors]
    x_mean = sum(xs) / len(xs)
    y_mean = sum(ys) / len(ys)
    sxx = sum((x - x_mean) ** 2 for x in xs)
    sxy = sum((x - x_mean) * (y - y_mean) for x, y in zip(xs, ys))
    return OrderReport(tuple(step_sizes), tuple(mean_errors), sxy / sxx)


def bezier_sample(p0, p1, p2, s: float):
    """Point on the quadratic Bezier curve through control points p_i = (t, psi).

    psi(s) = (1-s)^2 psi0 + 2s(1-s) psi1 + s^2 psi2 at time t0 + s*(t2-t0).
    Endpoints interpolate; the end tangents are proportional to the carried
    derivatives, which is what makes adjacent steps chain differentiably.
    """
    t0, psi0 = p0
    _, psi1 = p1
    t2, psi2 = p2
    c0 = (1.0 - s) * (1.0 - s)
    c1 = 2.0 * s * (1.0 - s)
    c2 = s * s
    psi = tuple(c0 * a + c1 * b + c2 * c for a, b, c in zip(psi0, psi1, psi2))
    return (t0 + s * (t2 - t0), psi)


def step_control_points(state_in: PhaseState, state_out: PhaseState):
    """Bezier control points of one asynchronous-leapfrog step.

    The interior point is the step's midpoint state psi + (h/2) phi; the
    resulting parabola has tangent phi at the start and phi_out at the end.
    """
    h = state_out.t - state_in.t
    tau = 0.5 * h
    mid = tuple(p + tau * f for p, f in zip(state_in.psi, state_in.phi))
    return (
        (state_in.t, state_in.psi),
        (state_in.t + tau, mid),
        (state_out.t, state_out.psi),
    )


def energy_drift(traj: TrajectoryRecord) -> Tuple[float, ...]:
    """H(v_i, x_i) - H0 per state of a Kepler trajectory."""
    x0, v0 = traj.states[0].psi
    h0 = kepler.hamiltonian(v0, x0)
    return tuple(kepler.hamiltonian(st.psi[1], st.psi[0]) - h0 for st in traj.states)


def radial_pairs_record(traj: TrajectoryRecord) -> TrajectoryRecord:
    """View a second-order radial record (psi=(x,), phi=(v,)) as psi=(x, v).

    The Kepler metrics above read positions and velocities from psi; the
    repacked derivative slot is a placeholder and must not be consumed.
    Records already in pair form pass through unchanged.
    """
    if len(traj.states[0].psi) == 2:
        return traj
    states = tuple(
        PhaseState(st.t, (st.psi[0], st.phi[0]), (st.phi[0], 0.0)) for st in traj.states
    )
    return TrajectoryRecord(states, traj.step_sizes, traj.jerk_values, traj.feval_count, traj.status)
