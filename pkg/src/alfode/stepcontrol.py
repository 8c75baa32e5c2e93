"""Kick-mismatch automatic step-size control.

After every trial step the controller compares the carried derivative
before and after the step with the dimensionless kappa measure.  Above the
critical level the step is rejected: the carried derivative is
re-initialized from a fresh rhs evaluation at the step start and the step
is retried shorter.  Well below the critical level the next step grows.
The scheme applies to any method that starts from a stored phi and leaves
a fresh one behind (the leapfrog family and the reformulated Runge-Kutta
steps); Stormer-Verlet has no re-initializable phi and is rejected.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .core import (
    BlowUpError,
    OdeSystem,
    PhaseState,
    StepUnderflowError,
    TrajectoryRecord,
    TrajectoryStatus,
    all_finite,
)
from .diagnostics import kappa


@dataclass(frozen=True)
class StepControlConfig:
    """Thresholds and step bounds for the controller.

    Rejection threshold a1 = kink_crit, growth threshold a2 = a1/2,
    shrink/grow factors f1 = 1 - frac and f2 = 1 + frac.
    """

    h_init: float
    h_min: float
    h_max: float
    kink_crit: float = 1e-3
    frac: float = 0.2
    retry_cap: int = 60

    def __post_init__(self):
        if not 0.0 < self.h_min < self.h_init < self.h_max:
            raise ValueError("need 0 < h_min < h_init < h_max")
        if self.kink_crit <= 0.0:
            raise ValueError("kink_crit must be positive")
        if not 0.0 < self.frac < 1.0:
            raise ValueError("frac must be in (0, 1)")
        if self.retry_cap < 1:
            raise ValueError("retry_cap must be >= 1")

    @property
    def a1(self) -> float:
        return self.kink_crit

    @property
    def a2(self) -> float:
        return 0.5 * self.kink_crit

    @property
    def f1(self) -> float:
        return 1.0 - self.frac

    @property
    def f2(self) -> float:
        return 1.0 + self.frac


def config_for_span(
    t_span: float,
    h_init: float,
    h_max: float = None,
    kink_crit: float = 1e-3,
    frac: float = 0.2,
    retry_cap: int = 60,
) -> StepControlConfig:
    """Config with the step floor tied to the run length (1e-12 * t_span)."""
    if t_span <= 0.0:
        raise ValueError("time span must be positive")
    return StepControlConfig(
        h_init=h_init,
        h_min=1e-12 * t_span,
        h_max=t_span if h_max is None else h_max,
        kink_crit=kink_crit,
        frac=frac,
        retry_cap=retry_cap,
    )


class AutoStepResult(NamedTuple):
    state: PhaseState
    h_used: float
    h_next: float
    kappa_value: float
    retries: int
    fevals: int


def auto_step(step, sys: OdeSystem, s: PhaseState, h: float, cfg: StepControlConfig) -> AutoStepResult:
    """One accepted step under kappa control.

    Rejection re-initializes phi := rhs(t, psi) (one extra evaluation,
    counted) before retrying at h*f1; the re-initialized phi stays in
    effect for the remaining attempts.  Accepted steps always satisfy
    kappa <= a1.
    """
    if not getattr(step, "phi_carrying", False):
        raise ValueError(f"step control needs a phi-carrying method, not {getattr(step, 'label', step)}")
    current = s
    h_try = h
    retries = 0
    fevals = 0
    while True:
        outcome = step(sys, current, h_try)
        fevals += outcome.fevals
        if not (all_finite(outcome.state.psi) and all_finite(outcome.state.phi)):
            raise BlowUpError(f"state not finite after trial step at t={current.t}")
        k = kappa(current.phi, outcome.state.phi)
        if k > cfg.a1:
            retries += 1
            if retries > cfg.retry_cap:
                raise StepUnderflowError(
                    f"step rejected more than {cfg.retry_cap} times at t={current.t}",
                    last_state=current,
                )
            phi_fresh = tuple(sys.rhs(current.t, current.psi))
            fevals += 1
            current = PhaseState(current.t, current.psi, phi_fresh)
            h_try *= cfg.f1
            if h_try < cfg.h_min:
                raise StepUnderflowError(
                    f"step size fell below h_min={cfg.h_min} at t={current.t}",
                    last_state=current,
                )
            continue
        if k < cfg.a2:
            h_next = min(h_try * cfg.f2, cfg.h_max)
        else:
            h_next = h_try
        return AutoStepResult(outcome.state, h_try, h_next, k, retries, fevals)


def drive_adaptive(
    step,
    sys: OdeSystem,
    state0: PhaseState,
    t_end: float,
    cfg: StepControlConfig,
    fevals0: int = 0,
) -> TrajectoryRecord:
    """Integrate from state0 to exactly t_end under kappa control.

    The recorded jerk values are the accepted steps' kappa measures.  The
    final step is clamped onto t_end; the clamp is not a rejection and may
    shorten h below the f1/f2 schedule.  Underflow and blow-up truncate
    the record and set the status instead of raising.
    """
    if t_end <= state0.t:
        raise ValueError("t_end must lie beyond the initial time")
    states = [state0]
    sizes = []
    kappas = []
    fevals = fevals0
    status = TrajectoryStatus.COMPLETED
    state = state0
    h_next = cfg.h_init
    while state.t < t_end:
        remaining = t_end - state.t
        h_use = min(h_next, remaining)
        try:
            res = auto_step(step, sys, state, h_use, cfg)
        except StepUnderflowError:
            status = TrajectoryStatus.STEP_UNDERFLOW
            break
        except (BlowUpError, OverflowError, ZeroDivisionError):
            status = TrajectoryStatus.BLEW_UP
            break
        fevals += res.fevals
        state = res.state
        if res.h_used == remaining:
            # land exactly on t_end (the stepper's t accumulation can be
            # off by an ulp)
            state = PhaseState(t_end, state.psi, state.phi)
        states.append(state)
        sizes.append(res.h_used)
        kappas.append(res.kappa_value)
        h_next = min(res.h_next, cfg.h_max)
    return TrajectoryRecord(
        states=tuple(states),
        step_sizes=tuple(sizes),
        jerk_values=tuple(kappas),
        feval_count=fevals,
        status=status,
    )
