import cmath
import math
import random

import pytest

from alfode import systems
from alfode.core import init_phase_state


def test_tanh_rhs():
    sys_o = systems.tanh_system()
    assert sys_o.rhs(0.0, (0.0,)) == (1.0,)
    assert sys_o.rhs(0.0, (1.0,)) == (0.0,)
    assert sys_o.rhs(0.0, (-1.0,)) == (0.0,)


def test_tanh_exact():
    assert systems.tanh_exact(1.0) == pytest.approx(math.tanh(1.0), rel=1e-15)
    assert systems.tanh_exact(0.7, 0.3) == pytest.approx(math.tanh(0.7 + math.atanh(0.3)), rel=1e-14)
    with pytest.raises(ValueError):
        systems.tanh_exact(1.0, 1.0)


def test_arctan_rhs_and_exact():
    sys_o = systems.arctan_blowup_system()
    assert sys_o.rhs(0.0, (0.0,)) == (1.0,)
    assert systems.arctan_exact(math.pi / 4) == pytest.approx(1.0, rel=1e-14)


def test_linear_embedding_values():
    one = systems.linear_test_system(1.0 + 0.0j)
    assert one.rhs(0.0, (1.0, 0.0)) == (1.0, 0.0)
    rot = systems.linear_test_system(1j)
    assert rot.rhs(0.0, (1.0, 0.0)) == (0.0, 1.0)


def test_linear_embedding_commutes_with_complex_multiplication():
    rng = random.Random(11)
    for _ in range(100):
        om = cmath.rect(rng.uniform(0.1, 2.0), rng.uniform(0, 2 * math.pi))
        sys_o = systems.linear_test_system(om)
        psi = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        twice = sys_o.rhs(0.0, sys_o.rhs(0.0, (psi.real, psi.imag)))
        direct = om * om * psi
        assert twice[0] == pytest.approx(direct.real, abs=1e-15 * (1 + abs(direct)))
        assert twice[1] == pytest.approx(direct.imag, abs=1e-15 * (1 + abs(direct)))


def test_kepler_adapters():
    sys_o = systems.kepler_system()
    assert sys_o.rhs(0.0, (1.0, 0.0)) == (0.0, 0.0)
    acc = systems.kepler_accel()
    assert acc.accel(0.0, (0.5,)) == (4.0,)


def test_counting_is_exact():
    sys_o, counter = systems.counted(systems.tanh_system())
    assert counter.count == 0
    init_phase_state(sys_o, 0.0, (0.0,))
    assert counter.count == 1
    for _ in range(5):
        sys_o.rhs(0.0, (0.1,))
    assert counter.count == 6

    acc, c2 = systems.counted(systems.kepler_accel())
    acc.accel(0.0, (1.0,))
    assert c2.count == 1


def test_counted_rejects_other_types():
    with pytest.raises(TypeError):
        systems.counted(object())
