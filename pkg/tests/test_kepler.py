import math
import random

import pytest

from alfode import kepler
from alfode.core import ConvergenceError, DomainError
from alfode.kepler import KeplerState


def bisect_kepler(m, eps, lo, hi, iters=80):
    """Independent root finder for E - eps*sin(E) - m = 0."""
    g = lambda e: e - eps * math.sin(e) - m
    assert g(lo) * g(hi) <= 0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if g(lo) * g(mid) <= 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def random_bound_state(rng):
    eps = rng.uniform(0.01, 0.95)
    x_min, x_max = kepler.x_range(eps)
    x = rng.uniform(x_min, x_max)
    h0 = 0.5 * (eps * eps - 1.0)
    v2 = 2.0 * (h0 - kepler.potential(x))
    v = math.copysign(math.sqrt(max(0.0, v2)), rng.uniform(-1, 1))
    return KeplerState(rng.uniform(-5.0, 5.0), x, v)


class TestPotentialAndHamiltonian:
    def test_minimum(self):
        assert kepler.potential(1.0) == -0.5
        assert kepler.hamiltonian(0.0, 1.0) == -0.5

    def test_perihelion_energy(self):
        # H(0, 1/1.15) = (0.15^2 - 1)/2
        assert kepler.hamiltonian(0.0, 1.0 / 1.15) == pytest.approx((0.15 ** 2 - 1.0) / 2.0, abs=1e-15)

    def test_domain(self):
        with pytest.raises(DomainError):
            kepler.potential(0.0)
        with pytest.raises(DomainError):
            kepler.potential(-1.0)


class TestRhs:
    def test_equilibrium(self):
        assert kepler.kepler_rhs(0.0, (1.0, 0.0)) == (0.0, 0.0)

    def test_values(self):
        assert kepler.kepler_rhs(0.0, (0.5, 0.0))[1] == pytest.approx(4.0)
        assert kepler.kepler_rhs(0.0, (2.0, 0.0))[1] == pytest.approx(-0.125)

    def test_autonomous(self):
        assert kepler.kepler_rhs(0.0, (0.8, 0.1)) == kepler.kepler_rhs(17.3, (0.8, 0.1))


class TestKeplerEquation:
    def test_fixed_points_of_sin(self):
        assert kepler.solve_kepler_equation(0.0, 0.3) == pytest.approx(0.0, abs=1e-12)
        assert kepler.solve_kepler_equation(math.pi, 0.7) == pytest.approx(math.pi, abs=1e-11)

    def test_against_bisection(self):
        e_ref = bisect_kepler(1.0, 0.15, 1.0, 1.3)
        e = kepler.solve_kepler_equation(1.0, 0.15, 1e-12)
        assert e == pytest.approx(e_ref, abs=1e-10)

    def test_residual_bound(self):
        rng = random.Random(7)
        for _ in range(300):
            m = rng.uniform(-10.0, 10.0)
            eps = rng.uniform(0.0, 0.97)
            acc = 10.0 ** rng.uniform(-13, -6)
            e = kepler.solve_kepler_equation(m, eps, acc)
            assert abs(e - m - eps * math.sin(e)) <= 10.0 * acc

    def test_bad_acc(self):
        with pytest.raises(ValueError):
            kepler.solve_kepler_equation(1.0, 0.5, 0.0)

    def test_iteration_cap(self, monkeypatch):
        monkeypatch.setattr(kepler, "KEPLER_ITER_CAP", 2)
        with pytest.raises(ConvergenceError) as info:
            kepler.solve_kepler_equation(1.0, 0.9, 1e-15)
        assert info.value.last_iterate is not None


class TestElements:
    def test_perihelion(self):
        el = kepler.elements_from_state(KeplerState(0.0, 1.0 / 1.15, 0.0))
        assert el.a == pytest.approx(1.0 / (1.0 - 0.15 ** 2), rel=1e-14)
        assert el.eps == pytest.approx(0.15, rel=1e-13)
        assert el.E == pytest.approx(0.0, abs=1e-15)
        assert el.M == pytest.approx(0.0, abs=1e-15)

    def test_circular(self):
        el = kepler.elements_from_state(KeplerState(0.0, 1.0, 0.0))
        assert el.eps == 0.0
        assert el.a == 1.0
        assert el.H0 == -0.5

    def test_eccentricity_energy_relation(self):
        rng = random.Random(1)
        for _ in range(200):
            s = random_bound_state(rng)
            el = kepler.elements_from_state(s)
            assert el.eps ** 2 == pytest.approx(1.0 + 2.0 * el.H0, abs=1e-12)
            assert el.n == pytest.approx(el.a ** -1.5, rel=1e-12)
            assert el.a > 0.5 and el.H0 < 0

    def test_unbound_rejected(self):
        with pytest.raises(DomainError):
            kepler.elements_from_state(KeplerState(0.0, 1.0, 2.0))


class TestExactEvolve:
    def test_identity(self):
        s = KeplerState(0.3, 0.9, 0.1)
        out = kepler.exact_evolve(s, 0.3)
        assert out.x == pytest.approx(s.x, abs=1e-10)
        assert out.v == pytest.approx(s.v, abs=1e-10)

    def test_period_roundtrip(self):
        s = kepler.perihelion_state(0.15)
        out = kepler.exact_evolve(s, kepler.period(0.15))
        assert out.x == pytest.approx(s.x, abs=1e-9)
        assert out.v == pytest.approx(s.v, abs=1e-9)

    def test_group_property(self):
        rng = random.Random(3)
        for _ in range(100):
            s = random_bound_state(rng)
            dt = rng.uniform(-10.0, 10.0)
            back = kepler.exact_evolve(kepler.exact_evolve(s, s.t + dt), s.t)
            assert back.x == pytest.approx(s.x, abs=1e-9)
            assert back.v == pytest.approx(s.v, abs=1e-9)

    def test_energy_exactness(self):
        rng = random.Random(5)
        for _ in range(200):
            s = random_bound_state(rng)
            out = kepler.exact_evolve(s, s.t + rng.uniform(-20.0, 20.0))
            assert kepler.hamiltonian(out.v, out.x) == pytest.approx(
                kepler.hamiltonian(s.v, s.x), abs=1e-10
            )

    def test_time_translation_commutes(self):
        s = KeplerState(0.0, 0.95, 0.05)
        shifted = KeplerState(2.0, 0.95, 0.05)
        a = kepler.exact_evolve(s, 1.3)
        b = kepler.exact_evolve(shifted, 3.3)
        assert a.x == pytest.approx(b.x, abs=1e-12)
        assert a.v == pytest.approx(b.v, abs=1e-12)


class TestOrbitConstants:
    def test_period_value(self):
        assert kepler.period(0.15) == pytest.approx(6.501, abs=1e-3)

    def test_x_range_value(self):
        x_min, x_max = kepler.x_range(0.15)
        assert x_min == pytest.approx(0.870, abs=1e-3)
        assert x_max == pytest.approx(1.176, abs=1e-3)

    def test_v_extreme(self):
        assert kepler.v_extreme(0.15) == 0.15

    def test_v_extreme_against_energy_condition(self):
        # largest |v| on the orbit solves v^2/2 - 1/2 = H0
        for eps in (0.1, 0.5, 0.9):
            h0 = kepler.hamiltonian(0.0, 1.0 / (1.0 + eps))
            v = math.sqrt(1.0 + 2.0 * h0)
            assert kepler.v_extreme(eps) == pytest.approx(v, rel=1e-12)

    def test_steps_per_rev(self):
        assert kepler.steps_per_rev(0.0, 32) == 32
        assert kepler.steps_per_rev(0.5, 32) == 111
        values = [kepler.steps_per_rev(k * 0.05, 17) for k in range(19)]
        assert values == sorted(values)

    def test_eps_validation(self):
        for fn in (kepler.period, kepler.x_range, kepler.v_extreme):
            with pytest.raises(ValueError):
                fn(1.0)
            with pytest.raises(ValueError):
                fn(-0.1)
