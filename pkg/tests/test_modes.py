import cmath
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jacobipath.jacobi import Potential, compute_jacobi_series
from jacobipath.modes import build_mode, residual_direct_check, schrodinger_residual, transport_residual
from jacobipath.series import PolyQP

from strategies import positive_fraction


def mode_for(coeffs, m=1, hbar=1, L=8):
    return build_mode(compute_jacobi_series(Potential.from_coeffs(coeffs, m=m, hbar=hbar), L))


def test_prefactor_starts_at_one():
    mode = mode_for([(3, 1)])
    assert mode.prefactor[0] == PolyQP.const(1)
    assert mode.prefactor * mode.prefactor == compute_jacobi_series(Potential.from_coeffs([(3, 1)]), 8).mixed_derivative()


@pytest.mark.parametrize("coeffs", [[(2, 1)], [(2, 3), (1, -2)], [(1, 5)], []])
def test_quadratic_residual_vanishes(coeffs):
    rep = schrodinger_residual(mode_for(coeffs, m=2, hbar=3))
    assert rep.leading_order == float("inf")


@settings(max_examples=15)
@given(st.builds(Fraction, st.integers(1, 5)), positive_fraction, positive_fraction, st.integers(-3, 3))
def test_cubic_leading_term(a, m, hbar, lin):
    rep = schrodinger_residual(mode_for([(3, a), (1, lin)], m=m, hbar=hbar))
    v3 = 6 * a
    assert rep.leading_order == 4
    assert rep.leading_coefficient == PolyQP.const(hbar ** 2 * v3 ** 2 / (8 * m ** 3))
    assert rep.full_residual[2].is_zero() and rep.full_residual[3].is_zero()


@settings(max_examples=15)
@given(st.builds(Fraction, st.integers(1, 5)), positive_fraction, positive_fraction)
def test_quartic_leading_term(a, m, hbar):
    rep = schrodinger_residual(mode_for([(4, a), (2, 1)], m=m, hbar=hbar))
    assert rep.leading_order == 2
    assert rep.leading_coefficient == PolyQP.const(hbar ** 2 * 24 * a / (8 * m ** 2))


@pytest.mark.parametrize("coeffs", [[(3, 1)], [(4, 1)], [(4, Fraction(1, 2)), (3, 2), (1, 1)]])
def test_two_routes_agree(coeffs):
    mode = mode_for(coeffs, m=2, hbar=3, L=7)
    assert residual_direct_check(mode).is_zero()
    assert transport_residual(mode).is_zero()


def test_mode_evaluation_matches_direct_formula():
    mode = mode_for([(3, 1)], L=8)
    q0, p0, t0 = 0.3, 0.7, 0.01
    js = compute_jacobi_series(Potential.from_coeffs([(3, 1)]), 8)
    amp = cmath.sqrt(js.mixed_derivative().eval(q0, p0, t0))
    expected = amp * cmath.exp(1j * js.j.eval(q0, p0, t0)) / cmath.sqrt(2 * cmath.pi)
    assert mode.evaluate(q0, p0, t0) == pytest.approx(expected, rel=1e-12)
