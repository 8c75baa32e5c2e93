"""Canonical test systems packaged as OdeSystem values."""

from __future__ import annotations

import math

from . import kepler
from .core import OdeSystem, SecondOrderSystem, Vec


def tanh_system() -> OdeSystem:
    """psi' = 1 - psi^2; from psi(0) = 0 the solution is tanh(t)."""

    def rhs(t: float, psi: Vec) -> Vec:
        p = psi[0]
        return (1.0 - p * p,)

    return OdeSystem(dim=1, rhs=rhs, label="tanh")


def tanh_exact(t: float, psi0: float = 0.0) -> float:
    """Exact solution through (0, psi0); requires |psi0| < 1."""
    if abs(psi0) >= 1.0:
        raise ValueError("exact tanh branch needs |psi0| < 1")
    return math.tanh(t + math.atanh(psi0))


def arctan_blowup_system() -> OdeSystem:
    """psi' = 1 + psi^2; from 0 the solution tan(t) escapes at t = pi/2.

    Used to exercise blow-up detection: past the pole the computed values
    grow without bound and the drivers must flag the trajectory rather
    than raise mid-run.
    """

    def rhs(t: float, psi: Vec) -> Vec:
        p = psi[0]
        return (1.0 + p * p,)

    return OdeSystem(dim=1, rhs=rhs, label="arctan")


def arctan_exact(t: float, psi0: float = 0.0) -> float:
    return math.tan(t + math.atan(psi0))


def linear_test_system(omega: complex) -> OdeSystem:
    """psi' = omega*psi for complex omega, embedded as two real components.

    psi = (re, im) represents re + i*im; the embedding commutes with
    complex multiplication, so one real run per basis vector suffices to
    reconstruct complex propagation matrices.
    """
    om_re = omega.real
    om_im = omega.imag

    def rhs(t: float, psi: Vec) -> Vec:
        re, im = psi
        return (om_re * re - om_im * im, om_re * im + om_im * re)

    return OdeSystem(dim=2, rhs=rhs, label=f"linear(omega={omega})")


def kepler_system() -> OdeSystem:
    """Radial Kepler oscillator in first-order form, psi = (x, v)."""
    return OdeSystem(dim=2, rhs=kepler.kepler_rhs, label="kepler")


def kepler_accel() -> SecondOrderSystem:
    """Radial Kepler oscillator as a second-order system, psi = (x,)."""

    def accel(t: float, q: Vec) -> Vec:
        return (kepler.radial_accel(q[0]),)

    return SecondOrderSystem(dim=1, accel=accel, label="kepler")


class EvalCounter:
    """Mutable tally of rhs/accel evaluations; shared by `counted`."""

    __slots__ = ("count",)

    def __init__(self) -> None:
        self.count = 0


def counted(sys):
    """Wrap a system so every evaluation increments a counter.

    Returns (wrapped system, counter).  Works for both OdeSystem and
    SecondOrderSystem.
    """
    counter = EvalCounter()
    if isinstance(sys, OdeSystem):
        inner = sys.rhs

        def rhs(t, psi):
            counter.count += 1
            return inner(t, psi)

        return OdeSystem(dim=sys.dim, rhs=rhs, label=sys.label), counter
    if isinstance(sys, SecondOrderSystem):
        inner = sys.accel

        def accel(t, q):
            counter.count += 1
            return inner(t, q)

        return SecondOrderSystem(dim=sys.dim, accel=accel, label=sys.label), counter
    raise TypeError(f"cannot instrument {type(sys).__name__}")
