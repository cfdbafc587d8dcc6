import math

import pytest
from hypothesis import given, settings, strategies as st

from prolate import semiclassical as sc
from prolate.errors import DomainError

SQRT2 = math.sqrt(2.0)


def test_I_at_one():
    assert sc.I_of_a(1.0) == pytest.approx(1.0, abs=1e-15)
    assert sc.I_direct(1.0) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("a", [2.0, 100.0, 1e4])
def test_closed_form_against_quadrature(a):
    assert sc.I_of_a(a) == pytest.approx(sc.I_direct(a), abs=1e-8)


@pytest.mark.parametrize("a", [0.0, -1.0, math.nan])
def test_domain(a):
    with pytest.raises(DomainError):
        sc.I_of_a(a)


def test_scaling_trivial_cases():
    assert sc.I_lambda(1.0, 7.3) == sc.I_of_a(7.3)
    assert sc.I_lambda(SQRT2, 4.0) == pytest.approx(2.0, abs=1e-14)
    assert sc.I_lambda(SQRT2, 100.0) == pytest.approx(sc.I_lambda_direct(SQRT2, 100.0), abs=1e-8)


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=0.3, max_value=3.0), st.floats(min_value=0.05, max_value=1e5))
def test_scaling_property(lam, a):
    direct = sc.I_lambda_direct(lam, a)
    assert sc.I_lambda(lam, a) == pytest.approx(direct, rel=1e-9, abs=1e-10)


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=0.1, max_value=1e6))
def test_I_increasing(a):
    assert sc.I_of_a(a * 1.01) > sc.I_of_a(a)


def test_expansion_remainder_shrinks():
    def remainder(a):
        return sc.I_of_a(a) - (0.5 * math.sqrt(a) * (math.log(a) - 2 + 4 * math.log(2)) + 1)

    assert abs(remainder(1e8)) < abs(remainder(1e4)) < abs(remainder(1e2))


def test_sigma_at_sqrt2_asymptotic_form():
    for E in (5.0, 50.0, 500.0):
        e = E / (2 * math.pi)
        assert sc.sigma(E, SQRT2).asymptotic == pytest.approx(e * (math.log(e) - 1 + math.log(2)) + 2, rel=1e-14)


def test_sigma_convergence():
    exact, asym = sc.sigma(100.0, 1.0)
    assert abs(exact - asym) < 0.1
    gaps = [abs(sc.sigma(E, 1.0).exact - sc.sigma(E, 1.0).asymptotic) for E in (100.0, 1e3, 1e4)]
    assert gaps[0] > gaps[1] > gaps[2]


def test_sigma_small_E():
    assert sc.sigma(1e-9, 1.0).exact == pytest.approx(1.0, abs=1e-9)


def test_predicted_count_forms():
    E = 2 * math.pi * math.e
    assert sc.predicted_dirac_count_asymptotic(E) == pytest.approx(4.0, abs=1e-14)
    for E in (10.0, 100.0, 1000.0):
        assert 2 * sc.sigma(E / 2, SQRT2).asymptotic == pytest.approx(sc.predicted_dirac_count_asymptotic(E), rel=1e-13)
        assert sc.predicted_dirac_count(E) == pytest.approx(2 * sc.sigma(E / 2, SQRT2).exact)


@pytest.mark.parametrize("lam", [1.0, SQRT2])
@pytest.mark.parametrize("E", [10.0, 100.0])
def test_area_routes_agree(lam, E):
    a = (E / (2 * math.pi)) ** 2 + lam**4
    assert sc.area_omega(lam, E) == pytest.approx(sc.I_lambda(lam, a), abs=1e-7)


def test_area_small_E():
    assert sc.area_omega(1.0, 1e-6) == pytest.approx(1.0, abs=1e-7)


def test_count_table():
    rows = sc.count_table([10.0, 20.0], SQRT2)
    assert [r.E for r in rows] == [10.0, 20.0]
    assert rows[1].predicted_count == pytest.approx(2 * rows[1].I_value)
    assert rows[0].a == pytest.approx((10 / (2 * math.pi)) ** 2 + 4)
