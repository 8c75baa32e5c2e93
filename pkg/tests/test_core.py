import math

import pytest

from alfode.core import (
    BlowUpError,
    OdeSystem,
    PhaseState,
    TrajectoryRecord,
    TrajectoryStatus,
    init_phase_state,
    vector_norm,
)
from alfode import kepler, systems


def test_vector_norm_values():
    assert vector_norm((0.0, 0.0)) == 0.0
    assert vector_norm((3.0, 4.0)) == 5.0
    assert vector_norm((1.0, 1.0, 1.0, 1.0)) == 2.0


def test_vector_norm_no_overflow():
    assert math.isfinite(vector_norm((1e200, 1e200)))


def test_init_phase_state_tanh():
    st = init_phase_state(systems.tanh_system(), 0.0, (0.0,))
    assert st == PhaseState(0.0, (0.0,), (1.0,))


def test_init_phase_state_kepler_perihelion():
    # direct evaluation of the radial acceleration at x = 1/1.15
    start = kepler.perihelion_state(0.15)
    st = init_phase_state(systems.kepler_system(), 0.0, (start.x, start.v))
    expected = (1.15 ** 2) * 0.15
    assert st.phi[0] == 0.0
    assert st.phi[1] == pytest.approx(expected, rel=1e-14)


def test_init_phase_state_zero_field():
    zero = OdeSystem(dim=3, rhs=lambda t, p: (0.0, 0.0, 0.0), label="zero")
    st = init_phase_state(zero, 1.5, (0.3, -2.0, 7.0))
    assert st.phi == (0.0, 0.0, 0.0)


def test_init_phase_state_is_raw_rhs():
    # the stored phi is the rhs output, bit for bit
    sys_o = systems.tanh_system()
    st = init_phase_state(sys_o, 0.0, (0.25,))
    assert st.phi == sys_o.rhs(0.0, (0.25,))


def test_init_phase_state_dim_mismatch():
    with pytest.raises(ValueError):
        init_phase_state(systems.tanh_system(), 0.0, (0.0, 0.0))


def test_init_phase_state_nonfinite_rhs():
    bad = OdeSystem(dim=1, rhs=lambda t, p: (math.inf,), label="bad")
    with pytest.raises(BlowUpError):
        init_phase_state(bad, 0.0, (0.0,))


def test_trajectory_record_length_invariants():
    s = PhaseState(0.0, (0.0,), (1.0,))
    with pytest.raises(ValueError):
        TrajectoryRecord((s, s), (0.1, 0.1), (0.0, 0.0), 0, TrajectoryStatus.COMPLETED)
    with pytest.raises(ValueError):
        TrajectoryRecord((s, s), (0.1,), (), 0, TrajectoryStatus.COMPLETED)
    rec = TrajectoryRecord((s, s), (0.1,), (0.0,), 2, TrajectoryStatus.COMPLETED)
    assert rec.n_steps == 1


def test_completed_record_is_finite():
    sys_o = systems.tanh_system()
    from alfode.integrators import drive_fixed, make_stepper

    rec = drive_fixed(make_stepper("alf"), sys_o, init_phase_state(sys_o, 0.0, (0.0,)), 0.1, 50)
    assert rec.status == TrajectoryStatus.COMPLETED
    assert all(math.isfinite(c) for st in rec.states for c in st.psi + st.phi)
