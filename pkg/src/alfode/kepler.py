"""Exact solution machinery for the radial Kepler oscillator.

Units are normalized so that mass, gravitational parameter, and angular
momentum are all 1.  Bound motion (total energy H < 0) is a nonlinear
oscillation of the radius x between the two roots of V(x) = H, and the
state at an arbitrary time is computable through Kepler's equation at a
cost independent of the time span.  This makes the system an exact
reference ("oracle") for judging numerical integrators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .core import ConvergenceError, DomainError

KEPLER_ACC_DEFAULT = 1e-12
KEPLER_ITER_CAP = 100_000


class KeplerState(NamedTuple):
    t: float
    x: float
    v: float


@dataclass(frozen=True)
class KeplerElements:
    """Orbital elements of a bound radial orbit at one epoch.

    a     major semi-axis, eps numerical eccentricity, n mean motion,
    E/M   eccentric and mean anomaly at the epoch, H0 total energy.
    """

    a: float
    eps: float
    n: float
    E: float
    M: float
    H0: float


def potential(x: float) -> float:
    """Effective radial potential V(x) = (1/x)(1/(2x) - 1); minimum V(1) = -1/2."""
    if x <= 0.0:
        raise DomainError(f"radius must be positive, got x={x}")
    return (1.0 / x) * (0.5 / x - 1.0)


def hamiltonian(v: float, x: float) -> float:
    """Total energy H(v, x) = v^2/2 + V(x), conserved along exact orbits."""
    return 0.5 * v * v + potential(x)


def radial_accel(x: float) -> float:
    """Radial acceleration (1/x^2)(1/x - 1)."""
    if x <= 0.0:
        raise DomainError(f"radius must be positive, got x={x}")
    inv = 1.0 / x
    return inv * inv * (inv - 1.0)


def kepler_rhs(t: float, psi) -> tuple:
    """First-order form: d(x, v)/dt = (v, (1/x^2)(1/x - 1))."""
    x, v = psi
    return (v, radial_accel(x))


def solve_kepler_equation(M: float, eps: float, acc: float = KEPLER_ACC_DEFAULT) -> float:
    """Solve Kepler's equation E = M + eps*sin(E) for E.

    Averaged fixed-point iteration: two plain fixed-point applications per
    round, averaged to damp the oscillation of the iterates.  Contracts for
    every eps < 1 and any real M (no range reduction needed); the iteration
    cap is a safety net only.
    """
    if acc <= 0.0:
        raise ValueError("accuracy must be positive")
    x_old = M + 1000.0
    x_new = M
    iterations = 0
    while abs(x_old - x_new) > acc:
        if iterations >= KEPLER_ITER_CAP:
            raise ConvergenceError(
                f"Kepler solver did not reach acc={acc} within {KEPLER_ITER_CAP} iterations",
                last_iterate=x_new,
            )
        x_old = x_new
        x1 = M + eps * math.sin(x_new)
        x2 = M + eps * math.sin(x1)
        x_new = 0.5 * (x1 + x2)
        iterations += 1
    return x_new


def elements_from_state(s: KeplerState) -> KeplerElements:
    """Orbital elements of the bound orbit through state s."""
    if s.x <= 0.0:
        raise DomainError(f"radius must be positive, got x={s.x}")
    h0 = hamiltonian(s.v, s.x)
    if h0 >= 0.0:
        raise DomainError(f"state is not bound: H={h0} >= 0")
    a = -1.0 / (2.0 * h0)
    # 1 - 1/a = 1 + 2*H0 >= 0 analytically; clip rounding residue
    eps = math.sqrt(max(0.0, 1.0 - 1.0 / a))
    n = a ** -1.5
    z_re = 1.0 - s.x / a
    z_im = s.x * s.v / math.sqrt(a)
    e0 = math.atan2(z_im, z_re)
    m0 = e0 - eps * math.sin(e0)
    return KeplerElements(a=a, eps=eps, n=n, E=e0, M=m0, H0=h0)


def exact_evolve(s: KeplerState, t1: float, acc: float = KEPLER_ACC_DEFAULT) -> KeplerState:
    """Exact state at time t1 of the orbit through s.

    Works for t1 before or after s.t (retro-diction included); the cost
    does not depend on |t1 - s.t|.
    """
    el = elements_from_state(s)
    m1 = el.M + (t1 - s.t) * el.n
    e1 = solve_kepler_equation(m1, el.eps, acc)
    x1 = el.a * (1.0 - el.eps * math.cos(e1))
    v1 = el.eps * el.a * el.a * el.n * math.sin(e1) / x1
    return KeplerState(t1, x1, v1)


def period(eps: float) -> float:
    """Oscillation period 2*pi*(1 - eps^2)^(-3/2) of the orbit family."""
    _check_eps(eps)
    return 2.0 * math.pi * (1.0 - eps * eps) ** -1.5


def perihelion_state(eps: float, t0: float = 0.0) -> KeplerState:
    """State at the inner turning point: x = x_min, v = 0."""
    _check_eps(eps)
    return KeplerState(t0, 1.0 / (1.0 + eps), 0.0)


def x_range(eps: float) -> tuple:
    """Radius range (x_min, x_max) = (1/(1+eps), 1/(1-eps)) of the orbit."""
    _check_eps(eps)
    return (1.0 / (1.0 + eps), 1.0 / (1.0 - eps))


def v_extreme(eps: float) -> float:
    """Largest |v| on the orbit; T(v) - 1/2 = H0 gives v_max = eps exactly."""
    _check_eps(eps)
    return eps


def steps_per_rev(eps: float, n_per_rev0: int) -> int:
    """Step count per revolution that keeps fixed-step work comparable
    across eccentricities: N(eps) = N(0) * sqrt((1+eps)/(1-eps)) / (1-eps),
    rounded up."""
    _check_eps(eps)
    if n_per_rev0 < 1:
        raise ValueError("base step count must be >= 1")
    return math.ceil(n_per_rev0 * math.sqrt((1.0 + eps) / (1.0 - eps)) / (1.0 - eps))


def _check_eps(eps: float) -> None:
    if not 0.0 <= eps < 1.0:
        raise ValueError(f"eccentricity must be in [0, 1), got {eps}")
