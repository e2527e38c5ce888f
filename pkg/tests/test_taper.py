import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vmdfourier.corpus import get_function
from vmdfourier.errors import CapabilityError, DomainError
from vmdfourier.funcmodel import FunctionDescriptor
from vmdfourier.taper import (
    SIGN_THRESHOLD,
    build_approximant,
    build_taper,
    eval_approximant,
    taper_table,
)

# integral of |h'''| over the taper interval by scipy.integrate.quad
# (epsabs = epsrel = 1e-13), frozen
ABS_H3 = {
    (10, 1, 0, 0): 2309.4010767585137,
    (10, 0, 0, 1): 2.1757550765363054,
    (10, 0, 1, 0): 117.78713589656722,
    (3, 0.5, -0.2, 0.7): 98.2365038567256,
}

ms = st.floats(min_value=2.0, max_value=1000.0)
coef = st.floats(min_value=-1.0, max_value=1.0)


def _close(got, want, rel=1e-10, scale=1.0):
    return abs(got - want) <= rel * max(abs(want), scale)


@settings(max_examples=200, deadline=None)
@given(ms, coef, coef, coef)
def test_boundary_conditions(m, a0, a1, a2):
    t = build_taper(m, a0, a1, a2)
    w = 1.0 / m
    for order, want in enumerate((a0, a1, a2)):
        assert _close(float(t.eval_local(0.0, order)), want)
        # vanishing values are compared against the natural scale of that derivative
        assert abs(float(t.eval_local(w, order))) <= 1e-10 * max(abs(a0), abs(a1), abs(a2), 1e-300) * m**order


@settings(max_examples=200, deadline=None)
@given(ms, coef, coef, coef)
def test_sup_bound(m, a0, a1, a2):
    t = build_taper(m, a0, a1, a2)
    x = np.linspace(m, m + 1 / m, 1000)
    assert np.max(np.abs(t(x))) <= t.sup_bound() * (1 + 1e-12) + 1e-300
    assert t.sup_abs() <= t.sup_bound() * (1 + 1e-12) + 1e-300


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=2.0, max_value=30.0), coef, coef, coef)
def test_blend_equals_factored_form(m, a0, a1, a2):
    t = build_taper(m, a0, a1, a2)
    x = np.linspace(m, m + 1 / m, 17)
    scale = max(abs(a0), abs(a1), abs(a2), 1e-300)
    assert np.allclose(t(x), t.eval_factored(x), rtol=1e-9, atol=1e-9 * scale)


@settings(max_examples=100, deadline=None)
@given(ms, coef, coef, coef)
def test_left_taper_mirrors(m, a0, a1, a2):
    left = build_taper(m, a0, a1, a2, "left")
    assert _close(float(left(-m)), a0)
    assert _close(float(left(-m, 1)), a1)
    assert _close(float(left(-m, 2)), a2)
    right = build_taper(m, a0, -a1, a2)
    x = np.linspace(m, m + 1 / m, 9)
    assert np.allclose(left(-x), right(x))
    assert np.allclose(left(-x, 3), -right(x, 3))


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=2.0, max_value=50.0), coef, coef, coef)
def test_sign_changes_are_zeros_of_h3(m, a0, a1, a2):
    t = build_taper(m, a0, a1, a2)
    scale = max(abs(a0) * m**3, abs(a1) * m**2, abs(a2) * m, 1e-300)
    for u in t.third_derivative_sign_changes():
        assert 0 < u < 1 / m
        assert abs(float(t.eval_local(u, 3))) <= 1e-8 * scale


@pytest.mark.parametrize("args", sorted(ABS_H3))
def test_abs_third_derivative_integral_against_quad(args):
    t = build_taper(*args)
    assert t.abs_third_derivative_integral() == pytest.approx(ABS_H3[args], rel=1e-12)


def test_third_derivative_changes_sign_for_pure_value_data():
    # a0 = 1, a1 = a2 = 0: h''' = -60000 at both ends and positive in between
    t = build_taper(10, 1, 0, 0)
    assert float(t.eval_local(0.0, 3)) == pytest.approx(-60000)
    assert float(t.eval_local(0.1, 3)) == pytest.approx(-60000)
    assert float(t.eval_local(0.05, 3)) == pytest.approx(30000)
    assert len(t.third_derivative_sign_changes()) == 2


def test_p_coefficients():
    t = build_taper(10, 1, 0, 0)
    c0, c1, c2 = t.p_coeffs
    assert (c0, c1, 2 * c2) == (-1000.0, -30000.0, -1.2e6)


def test_threshold_enforced():
    with pytest.raises(DomainError):
        build_taper(SIGN_THRESHOLD, 1, 0, 0)
    build_taper(math.nextafter(SIGN_THRESHOLD, 3), 1, 0, 0)
    with pytest.raises(DomainError):
        build_taper(5, 1, 0, 0, side="up")


def test_zero_data_gives_zero_taper():
    t = build_taper(7, 0, 0, 0)
    x = np.linspace(7, 7 + 1 / 7, 11)
    for order in range(4):
        assert np.all(t(x, order) == 0)
    assert t.abs_third_derivative_integral() == 0


def test_taper_table_columns():
    tab = taper_table(build_taper(10, 1, 0, 0), 100)
    assert tab.shape == (100, 5)
    assert tab[0, :2] == pytest.approx([10.0, 1.0])
    assert tab[-1, 0] == pytest.approx(10.1)
    assert tab[-1, 1:4] == pytest.approx([0, 0, 0], abs=1e-9)
    left = taper_table(build_taper(10, 1, 0.5, 0, "left"), 11)
    assert left[-1, 0] == -10.0 and left[-1, 1] == pytest.approx(1.0)
    assert left[-1, 2] == pytest.approx(0.5)
    with pytest.raises(DomainError):
        taper_table(build_taper(10, 1, 0, 0), 1)


class TestApproximant:
    @pytest.mark.parametrize("name", ["runge", "odd_vmd", "gauss", "osc_deriv"])
    @pytest.mark.parametrize("m", [2, 5, 40])
    def test_c2_joins(self, name, m):
        f = get_function(name)
        fm = build_approximant(f, m)
        s = fm.support
        for order in range(3):
            for x0 in (m, -m, s, -s):
                lo = float(eval_approximant(fm, np.nextafter(x0, -np.inf), order))
                hi = float(eval_approximant(fm, np.nextafter(x0, np.inf), order))
                scale = max(1.0, f.norm(order))
                assert abs(lo - hi) <= 1e-8 * scale * m ** (order + 1)

    def test_zero_beyond_support(self, runge):
        fm = build_approximant(runge, 10)
        assert np.all(fm(np.array([-11.0, 10.2, 50.0])) == 0)
        assert fm(3.0) == pytest.approx(0.1)

    def test_constants(self, runge):
        fm = build_approximant(runge, 10)
        n0, n1, n2, n3 = runge.sup_norms
        assert fm.D_const == pytest.approx(16 * n0 + 7 * n1 + n2)
        assert fm.C3_const == pytest.approx((2 + 2 * n3) / math.sqrt(2 * math.pi))
        assert fm.knots == pytest.approx((-10.1, -10, 10, 10.1))

    def test_missing_pieces(self):
        f = FunctionDescriptor("bare", np.cos)
        with pytest.raises(CapabilityError) as exc:
            build_approximant(f, 5)
        assert "deriv1" in str(exc.value) and "deriv2" in str(exc.value)

    @pytest.mark.parametrize("m", [1, 2.5, 0])
    def test_bad_m(self, runge, m):
        with pytest.raises(DomainError):
            build_approximant(runge, m)

    def test_without_third_norm(self, runge):
        from dataclasses import replace

        f = replace(runge, sup_norms=runge.sup_norms[:3] + (None,))
        assert build_approximant(f, 5).C3_const is None
