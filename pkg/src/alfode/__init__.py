"""Asynchronous-leapfrog ODE toolkit.

Explicit one-step integrators built around the asynchronous leapfrog
family (plain, densified, averaged), with classic leapfrog, second-order
Runge-Kutta and Stormer-Verlet for comparison, an exact Kepler-oscillator
reference solution, linear stability analysis, interaction-picture
diagnostics, and kick-mismatch automatic step control.
"""

from .core import (
    BlowUpError,
    ConvergenceError,
    DomainError,
    OdeSystem,
    PhaseState,
    SecondOrderSystem,
    StepUnderflowError,
    TrajectoryRecord,
    TrajectoryStatus,
    init_phase_state,
    vector_norm,
)
from .integrators import (
    LeapfrogPair,
    MechanicalSystem,
    Mech2State,
    StepOutcome,
    TimePoint,
    adalf_step,
    adalf2_step,
    alf_step,
    classic_lf_step,
    dalf_step,
    drive_fixed,
    init_mech2_state,
    lf_init,
    lf_restart,
    make_stepper,
    reverse_pair,
    rk2_step,
    stormer_verlet_step,
)
from .stepcontrol import StepControlConfig, auto_step, config_for_span, drive_adaptive

__version__ = "0.1.0"
