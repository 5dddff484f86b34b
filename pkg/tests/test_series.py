from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from jacobipath.series import (
    GaussQ,
    I,
    OrderMismatchError,
    PolyQP,
    TauSeries,
    UnsupportedLeadingTermError,
    series_inv,
    series_mul,
    series_sqrt,
    to_exact,
)

from strategies import polys, series, small_fraction

q, p = PolyQP.q(), PolyQP.p()


def test_gaussq_canonicalizes_real_results():
    z = I * I
    assert z == -1
    assert isinstance(to_exact(GaussQ(3, 0)), Fraction)
    assert (GaussQ(1, 2) * GaussQ(1, -2)) == 5
    assert complex(GaussQ(Fraction(1, 2), -3)) == complex(0.5, -3)


def test_gaussq_division_roundtrip():
    a, b = GaussQ(2, 5), GaussQ(-1, 3)
    assert (a / b) * b == a
    assert 1 / I == -I


def test_to_exact_rejects_floats():
    with pytest.raises(TypeError):
        to_exact(0.5)


def test_poly_basic_algebra():
    a = (q + p) ** 2
    assert a == q * q + 2 * q * p + p * p
    assert a.diff("q") == 2 * q + 2 * p
    assert (q ** 3).integrate_q() == q ** 4 / 4
    assert (q * p * p).divide_by_p() == q * p
    assert a.deg_q == 2 and a.deg_p == 2
    assert PolyQP().deg_q < 0


def test_divide_by_p_requires_divisibility():
    with pytest.raises(ValueError):
        (q + p).divide_by_p()


def test_substitute_shift():
    w = q ** 3
    shifted = w.substitute_q(q + p)
    assert shifted == (q + p) ** 3


def test_eval_matches_exact():
    a = q ** 2 * p - Fraction(3, 2) * p ** 3 + 7
    assert a.eval_exact(Fraction(1, 3), Fraction(-2)) == Fraction(1, 9) * -2 - Fraction(3, 2) * -8 + 7
    assert a.eval(1 / 3, -2.0) == pytest.approx(float(a.eval_exact(Fraction(1, 3), Fraction(-2))))


@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a - a == PolyQP()


@given(polys(), polys())
def test_leibniz_rule(a, b):
    for var in ("q", "p"):
        assert (a * b).diff(var) == a.diff(var) * b + a * b.diff(var)


@given(polys())
def test_integrate_then_differentiate(a):
    assert a.integrate_q().diff("q") == a


@given(series(), series(), series())
def test_series_ring(a, b, c):
    assert series_mul(a, b + c) == series_mul(a, b) + series_mul(a, c)
    assert (a * b) * c == a * (b * c)


@given(series(unit=True))
def test_sqrt_squares_back(a):
    r = series_sqrt(a)
    assert r * r == a


@given(series(unit=True))
def test_inverse(a):
    assert series_inv(a) * a == TauSeries([1], a.order)


def test_sqrt_rejects_non_unit_leading_term():
    with pytest.raises(UnsupportedLeadingTermError):
        series_sqrt(TauSeries([2, 1], 2))
    with pytest.raises(UnsupportedLeadingTermError):
        series_inv(TauSeries([q, 1], 2))


def test_order_mismatch():
    with pytest.raises(OrderMismatchError):
        TauSeries([1, q], 2) + TauSeries([1, q], 3)


def test_diff_tau_lowers_order():
    s = TauSeries([q, p, q * p, p ** 2], 3)
    d = s.diff_tau()
    assert d.order == 2
    assert d == TauSeries([p, 2 * q * p, 3 * p ** 2], 2)


def test_leading_order_and_zero():
    assert TauSeries([0, 0, q], 3).leading_order() == 2
    assert TauSeries([], 4).leading_order() == float("inf")
    assert TauSeries([0, 0, q], 3).is_zero(through=1)


@given(series(), small_fraction, small_fraction, small_fraction)
def test_eval_is_consistent_with_array(a, q0, p0, t0):
    arr = a.to_array()
    total = 0
    for l in range(arr.shape[0]):
        for i in range(arr.shape[1]):
            for j in range(arr.shape[2]):
                total += arr[l, i, j] * float(q0) ** i * float(p0) ** j * float(t0) ** l
    assert a.eval(float(q0), float(p0), float(t0)) == pytest.approx(total, abs=1e-9)


@given(st.integers(1, 5))
def test_scale_tau(n):
    s = TauSeries([q] * (n + 1), n)
    scaled = s.scale_tau(Fraction(1, 2))
    assert all(scaled[l] == q / 2 ** l for l in range(n + 1))
