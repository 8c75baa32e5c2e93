"""Linear-test-equation stability analysis.

On psi' = omega*psi every method here acts linearly on (psi, phi), so one
step is a 2x2 complex propagation matrix; h*omega lies in the set of
absolute stability iff both eigenvalues have modulus <= 1 (closed set, so
marginal leapfrog cases on the imaginary axis count as stable).

Matrices are extracted from the step algorithms themselves by propagating
basis states through the real embedding.  For the plain and densified
leapfrog and the Runge-Kutta family the entries also have simple closed
forms, kept here as cross-checks.  For the averaged method only the trace
and determinant have dependable closed forms; its individual off-diagonal
entries depend on a basis convention, so the numeric matrix is the ground
truth and eigenvalue formulas are validated against it.

The imaginary-axis boundary search runs the step arithmetic under mpmath:
the Runge-Kutta family is unstable on the whole axis but with a margin
|lambda| - 1 ~ c^4/8 that drops below double-precision resolution for
c < 1e-4, so certifying "unstable arbitrarily close to 0" needs the
extended-precision evaluation.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import NamedTuple, Tuple

import mpmath

from .core import OdeSystem, PhaseState
from .integrators import make_stepper

MEMBERSHIP_TOL = 1e-12


class PropagationMatrix(NamedTuple):
    """One-step map (psi, phi) -> (alpha*psi + beta*phi, gamma*psi + delta*phi)."""

    alpha: complex
    beta: complex
    gamma: complex
    delta: complex


def _as_stepper(method):
    if callable(method):
        return method
    return make_stepper(method)


def _embedding_runs(step, h, om_re, om_im, zero, one):
    """Propagate the two basis states (psi,phi) = (1,0), (0,1) through one
    step on the real embedding of psi' = omega*psi.  Field-agnostic: the
    state components may be floats or mpmath numbers."""

    def rhs(t, psi):
        re, im = psi
        return (om_re * re - om_im * im, om_re * im + om_im * re)

    sys = OdeSystem(dim=2, rhs=rhs, label="linear-embedding")
    out_psi = step(sys, PhaseState(zero, (one, zero), (zero, zero)), h).state
    out_phi = step(sys, PhaseState(zero, (zero, zero), (one, zero)), h).state
    return out_psi, out_phi


def propagation_matrix_numeric(method, h: float, omega: complex) -> PropagationMatrix:
    """Extract the propagation matrix by running the actual step algorithm.

    The step map is complex-linear in (psi, phi), so propagating the two
    real basis states determines the matrix exactly.
    """
    step = _as_stepper(method)
    out_psi, out_phi = _embedding_runs(step, h, omega.real, omega.imag, 0.0, 1.0)
    return PropagationMatrix(
        alpha=complex(out_psi.psi[0], out_psi.psi[1]),
        beta=complex(out_phi.psi[0], out_phi.psi[1]),
        gamma=complex(out_psi.phi[0], out_psi.phi[1]),
        delta=complex(out_phi.phi[0], out_phi.phi[1]),
    )


def eigenvalues(m: PropagationMatrix) -> Tuple[complex, complex]:
    """Roots of lambda^2 - tr*lambda + det, by the quadratic formula."""
    tr = m.alpha + m.delta
    det = m.alpha * m.delta - m.beta * m.gamma
    disc = cmath.sqrt(tr * tr - 4.0 * det)
    return ((tr - disc) / 2.0, (tr + disc) / 2.0)


def spectral_radius(m: PropagationMatrix) -> float:
    l1, l2 = eigenvalues(m)
    return max(abs(l1), abs(l2))


def is_absolutely_stable(method, z: complex, tol: float = MEMBERSHIP_TOL) -> bool:
    """Whether h*omega = z lies in the method's set of absolute stability.

    Closed-set membership with a small rounding guard: both eigenvalue
    moduli must stay below 1 + tol, so the exactly-marginal leapfrog cases
    on the imaginary axis register as stable.
    """
    z = complex(z)
    if z == 0:
        return True
    h = abs(z)
    return spectral_radius(propagation_matrix_numeric(method, h, z / h)) <= 1.0 + tol


def _stable_on_axis_mp(step, c: float, dps: int = 40) -> bool:
    """Membership test at z = i*c with the step arithmetic run under mpmath."""
    with mpmath.workdps(dps):
        zero = mpmath.mpf(0)
        one = mpmath.mpf(1)
        out_psi, out_phi = _embedding_runs(step, c, zero, one, zero, one)
        alpha = mpmath.mpc(out_psi.psi[0], out_psi.psi[1])
        gamma = mpmath.mpc(out_psi.phi[0], out_psi.phi[1])
        beta = mpmath.mpc(out_phi.psi[0], out_phi.psi[1])
        delta = mpmath.mpc(out_phi.phi[0], out_phi.phi[1])
        tr = alpha + delta
        det = alpha * delta - beta * gamma
        disc = mpmath.sqrt(tr * tr - 4 * det)
        radius = max(abs((tr - disc) / 2), abs((tr + disc) / 2))
        return radius <= 1 + mpmath.mpf("1e-25")


def imaginary_axis_boundary(method, tol: float = 1e-6, c_max: float = 4.0) -> float:
    """Largest c >= 0 below which i*c stays absolutely stable, by bisection.

    Returns the certified-stable end of the final bracket (error below
    tol); a method unstable arbitrarily close to the origin comes out as
    exactly 0.
    """
    if tol <= 0.0:
        raise ValueError("bisection tolerance must be positive")
    step = _as_stepper(method)
    if _stable_on_axis_mp(step, c_max):
        raise ValueError(f"method still stable at i*{c_max}; raise c_max")
    lo, hi = 0.0, c_max
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _stable_on_axis_mp(step, mid):
            lo = mid
        else:
            hi = mid
    return lo


@dataclass(frozen=True)
class StabilityGrid:
    """Cell-center stability membership over a rectangle of the h*omega plane.

    ``cells`` is row-major: index iy*nx + ix, ix scanning the real axis.
    """

    window: Tuple[float, float, float, float]  # re_min, re_max, im_min, im_max
    nx: int
    ny: int
    cells: Tuple[bool, ...]

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise ValueError("grid needs nx, ny >= 2")
        if len(self.cells) != self.nx * self.ny:
            raise ValueError("cell count must be nx*ny")

    def center(self, ix: int, iy: int) -> complex:
        re_min, re_max, im_min, im_max = self.window
        return complex(
            re_min + (ix + 0.5) * (re_max - re_min) / self.nx,
            im_min + (iy + 0.5) * (im_max - im_min) / self.ny,
        )

    def cell(self, ix: int, iy: int) -> bool:
        return self.cells[iy * self.nx + ix]


def stability_region_scan(method, window, nx: int, ny: int, tol: float = MEMBERSHIP_TOL) -> StabilityGrid:
    """Evaluate absolute-stability membership at every cell center.

    Cells are independent pure evaluations, so callers may parallelize;
    this implementation scans sequentially.
    """
    re_min, re_max, im_min, im_max = window
    if not (re_min < re_max and im_min < im_max):
        raise ValueError("window must be a non-degenerate rectangle")
    step = _as_stepper(method)
    grid = StabilityGrid(tuple(window), nx, ny, (False,) * (nx * ny))
    cells = [
        is_absolutely_stable(step, grid.center(ix, iy), tol)
        for iy in range(ny)
        for ix in range(nx)
    ]
    return StabilityGrid(tuple(window), nx, ny, tuple(cells))


# --- closed forms kept as cross-checks -------------------------------------


def matrix_alf(h: float, omega: complex) -> PropagationMatrix:
    z = h * omega
    return PropagationMatrix(1.0 + z, 0.5 * h * z, 2.0 * omega, -1.0 + z)


def matrix_dalf(h: float, omega: complex) -> PropagationMatrix:
    z = h * omega
    return PropagationMatrix(
        1.0 + z + 0.5 * z * z,
        0.125 * h * z * z,
        2.0 * omega * z,
        1.0 - z + 0.5 * z * z,
    )


def matrix_rk2(h: float, omega: complex, a1: float) -> PropagationMatrix:
    z = h * omega
    return PropagationMatrix(
        1.0 + z * (1.0 - a1),
        h * (a1 + 0.5 * z),
        omega * (1.0 + z * (1.0 - a1)),
        z * (a1 + 0.5 * z),
    )


def adalf_trace_det(z: complex) -> Tuple[complex, complex]:
    """Closed-form trace and determinant of the averaged method's matrix."""
    return ((4.0 + 3.0 * z + 3.0 * z * z) / 4.0, -z / 4.0)


def ev_alf(z: complex) -> Tuple[complex, complex]:
    root = cmath.sqrt(1.0 + z * z)
    return (z - root, z + root)


def ev_dalf(z: complex) -> Tuple[complex, complex]:
    zz = z * z
    root = z * cmath.sqrt(4.0 + zz)
    return (0.5 * (2.0 + zz - root), 0.5 * (2.0 + zz + root))


def ev_adalf(z: complex) -> Tuple[complex, complex]:
    s = 4.0 + 3.0 * z + 3.0 * z * z
    root = cmath.sqrt(16.0 * z + s * s)
    return ((s - root) / 8.0, (s + root) / 8.0)


def ev_rk2(z: complex) -> Tuple[complex, complex]:
    return (0.0 + 0.0j, 1.0 + z + 0.5 * z * z)
