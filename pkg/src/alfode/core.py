"""Shared value types: state vectors, phase states, systems, trajectories.

States are plain tuples of floats.  Everything here is immutable after
construction, so values can be shared freely between threads; right-hand
side evaluators are expected to be reentrant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, NamedTuple, Sequence, Tuple

Vec = Tuple[float, ...]


class BlowUpError(RuntimeError):
    """A state or derivative left the representable range (non-finite)."""


class DomainError(BlowUpError):
    """An evaluator was called outside its domain (e.g. radius <= 0)."""


class StepUnderflowError(RuntimeError):
    """Adaptive step control pushed h below its floor.

    ``last_state`` holds the last accepted state before the failure.
    """

    def __init__(self, message: str, last_state=None):
        super().__init__(message)
        self.last_state = last_state


class ConvergenceError(RuntimeError):
    """A fixed-point iteration ran out of iterations.

    ``last_iterate`` holds the final iterate for inspection.
    """

    def __init__(self, message: str, last_iterate=None):
        super().__init__(message)
        self.last_iterate = last_iterate


def vector_norm(v: Sequence[float]) -> float:
    """Euclidean norm of a state vector (overflow-safe)."""
    return math.hypot(*v)


def all_finite(v: Sequence[float]) -> bool:
    return all(math.isfinite(c) for c in v)


def add_scaled(y: Sequence[float], a: float, x: Sequence[float]) -> Vec:
    """y + a*x, elementwise."""
    return tuple(yi + a * xi for yi, xi in zip(y, x))


class PhaseState(NamedTuple):
    """One trajectory point (t, psi, phi); phi estimates d(psi)/dt."""

    t: float
    psi: Vec
    phi: Vec


@dataclass(frozen=True)
class OdeSystem:
    """First-order system psi' = rhs(t, psi).

    ``rhs`` must be deterministic and return a vector of length ``dim``
    for every input of length ``dim``.
    """

    dim: int
    rhs: Callable[[float, Vec], Vec]
    label: str = ""

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("system dimension must be positive")


@dataclass(frozen=True)
class SecondOrderSystem:
    """psi'' = accel(t, psi) with velocity-independent acceleration."""

    dim: int
    accel: Callable[[float, Vec], Vec]
    label: str = ""

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("system dimension must be positive")


class TrajectoryStatus(str, Enum):
    COMPLETED = "completed"
    BLEW_UP = "blew_up"
    STEP_UNDERFLOW = "step_underflow"


@dataclass(frozen=True)
class TrajectoryRecord:
    """Accepted-step sequence with per-step size and jerk.

    ``jerk_values[i]`` is the step-quality measure recorded by the driver
    that produced the record (kick-mismatch jerk for fixed-step runs of the
    kick-structured methods, the accept/reject kappa for adaptive runs);
    all values lie in [0, 1].  ``feval_count`` is the total number of
    right-hand-side evaluations charged to the run.
    """

    states: Tuple[PhaseState, ...]
    step_sizes: Tuple[float, ...]
    jerk_values: Tuple[float, ...]
    feval_count: int
    status: TrajectoryStatus

    def __post_init__(self):
        if len(self.step_sizes) != len(self.states) - 1:
            raise ValueError("need exactly one step size per state transition")
        if len(self.jerk_values) != len(self.step_sizes):
            raise ValueError("need exactly one jerk value per step")

    @property
    def n_steps(self) -> int:
        return len(self.step_sizes)


def init_phase_state(sys: OdeSystem, t0: float, psi0: Sequence[float]) -> PhaseState:
    """Augment initial data to a full phase state: phi0 := rhs(t0, psi0).

    Exactly one rhs evaluation; the derivative estimate is stored as
    returned, with no smoothing.
    """
    psi0 = tuple(psi0)
    if len(psi0) != sys.dim:
        raise ValueError(f"initial state has length {len(psi0)}, system dim is {sys.dim}")
    phi0 = tuple(sys.rhs(t0, psi0))
    if not all_finite(phi0):
        raise BlowUpError(f"rhs not finite at initial state t={t0}")
    return PhaseState(t0, psi0, phi0)
