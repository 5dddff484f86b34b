"""Acceptance gate: one test per criterion, at the stated tolerances and runtime budgets.

Run standalone with ``python3 tests/test_acceptance.py``; a PASS/FAIL line per
criterion is printed in the terminal summary.
"""

import math
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from jacobipath.jacobi import (
    Potential,
    compute_jacobi_series,
    harmonic_closed_form,
    hj_residual,
    resummation_check,
)
from jacobipath.kernels import free_kernel, harmonic_kernel, newton_wigner_reference, relativistic_momentum_integral
from jacobipath.modes import build_mode, schrodinger_residual
from jacobipath.ordering import (
    INDUCED,
    RULES,
    classical_limit_check,
    hermiticity_check,
    induced_operator,
    quantize,
    table_operator,
    verify_induced_rule,
)
from jacobipath.propagator import (
    Grid1D,
    QuadParams,
    WaveState,
    build_slice_matrix,
    infinitesimal_qq,
    loglog_slope,
    propagate,
    verify_short_time_reduction,
)
from jacobipath.kernels import gaussian_packet
from jacobipath.series import PolyQP

from conftest import ACCEPTANCE_LINES

q, p = PolyQP.q(), PolyQP.p()


def report(n: int, ok: bool, detail: str):
    ACCEPTANCE_LINES.append(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def test_criterion_01_recurrence_fidelity():
    ok = True
    with Timer() as t:
        for m in (Fraction(1), Fraction(2), Fraction(7, 3)):
            pot = Potential.from_coeffs([(3, 1), (2, 2), (1, 1)], m=m)
            v = [pot.v.diff("q", k) for k in range(5)]
            expected = [
                -p * p / (2 * m) - v[0],
                p * v[1] / (2 * m),
                -p * p * v[2] / (6 * m ** 2) - v[1] * v[1] / (6 * m),
                p ** 3 * v[3] / (24 * m ** 3) + Fraction(5, 24) * p * v[1] * v[2] / m ** 2,
                -p ** 4 * v[4] / (120 * m ** 4)
                - p * p * v[2] * v[2] / (15 * m ** 3)
                - Fraction(3, 40) * p * p * v[1] * v[3] / m ** 3
                - v[1] * v[1] * v[2] / (15 * m ** 2),
            ]
            js = compute_jacobi_series(pot, 5)
            ok &= all(js.coefficient(l + 1) == e for l, e in enumerate(expected))
    report(1, ok and t.elapsed < 1.0, f"J1..J5 exact for m in {{1, 2, 7/3}}; {t.elapsed:.3f}s (< 1s)")


def test_criterion_02_hj_exactness():
    with Timer() as t:
        cases = {"q": [(1, 1)], "q^2": [(2, 1)], "q^3": [(3, 1)], "q^4": [(4, 1)], "q^3+q": [(3, 1), (1, 1)]}
        ok = all(hj_residual(compute_jacobi_series(Potential.from_coeffs(c), 10)).is_zero() for c in cases.values())
    report(2, ok and t.elapsed < 5.0, f"HJ residual zero through tau^9 at L = 10 for 5 potentials; {t.elapsed:.3f}s (< 5s)")


def test_criterion_03_harmonic_closed_form():
    with Timer() as t:
        ok = all(
            compute_jacobi_series(Potential.harmonic(m, w), 8).j == harmonic_closed_form(m, w, 8).j
            for m, w in ((1, 1), (2, Fraction(1, 2)))
        )
    report(3, ok and t.elapsed < 2.0, f"closed form equals recurrence to tau^8; {t.elapsed:.3f}s (< 2s)")


def test_criterion_04_resummation():
    with Timer() as t:
        ok = all(resummation_check(Potential.from_coeffs([(d, 1)]), 6).is_zero() for d in (3, 4))
    report(4, ok and t.elapsed < 2.0, f"resummed leading part exact to tau^6 for q^3, q^4; {t.elapsed:.3f}s (< 2s)")


def test_criterion_05_residual_orders():
    ok = True
    with Timer() as t:
        for m, hbar in ((Fraction(1), Fraction(1)), (Fraction(2), Fraction(3)), (Fraction(7, 3), Fraction(1, 2))):
            quad = schrodinger_residual(build_mode(compute_jacobi_series(
                Potential.from_coeffs([(2, 3), (1, -1)], m=m, hbar=hbar), 8)))
            ok &= quad.full_residual.is_zero() and quad.full_residual.order == 8
            for coeffs in ([(3, 1)], [(3, 2), (1, 1)]):
                pot = Potential.from_coeffs(coeffs, m=m, hbar=hbar)
                rep = schrodinger_residual(build_mode(compute_jacobi_series(pot, 8)))
                v3 = pot.v.diff("q", 3)
                ok &= rep.leading_order == 4
                ok &= rep.full_residual[2].is_zero() and rep.full_residual[3].is_zero()
                ok &= rep.leading_coefficient == v3 * v3 * hbar ** 2 / (8 * m ** 3)
            pot = Potential.from_coeffs([(4, 1), (3, 1)], m=m, hbar=hbar)
            rep = schrodinger_residual(build_mode(compute_jacobi_series(pot, 8)))
            ok &= rep.leading_order == 2
            ok &= rep.leading_coefficient == pot.v.diff("q", 4) * hbar ** 2 / (8 * m ** 2)
    report(5, ok and t.elapsed < 5.0, f"quadratic zero to tau^8, cubic tau^4 coefficient, quartic tau^2 coefficient; {t.elapsed:.3f}s (< 5s)")


def test_criterion_06_ordering():
    with Timer() as t:
        grid = [(m, k) for m in range(5) for k in range(5)]
        induced = verify_induced_rule(4, 4)["passed"]
        herm = all(hermiticity_check(induced_operator(m, k)) for m, k in grid)
        rows = all(
            quantize(m, k, RULES[name]) == table_operator(name, m, k)
            for name in ("weyl", "born-jordan", "symmetric", "standard", "anti-standard")
            for m, k in grid
        )
        limit = classical_limit_check(INDUCED)
    ok = induced and herm and rows and limit
    report(6, ok and t.elapsed < 2.0,
           f"induced rule {induced}, hermitian {herm}, table rows {rows}, classical limit {limit}; {t.elapsed:.3f}s (< 2s)")


def test_criterion_07_free_particle():
    with Timer() as t:
        js = compute_jacobi_series(Potential.free(), 8)
        grid = Grid1D(-4.0, 4.0, 64)
        x = grid.points
        eps = -0.1j
        K1 = build_slice_matrix(js, grid, eps)
        exact = free_kernel(x[:, None], x[None, :], eps)
        rel = float(np.max(np.abs(K1.kernel - exact) / np.abs(exact)))
        K2 = build_slice_matrix(js, grid, 2 * eps)
        inner = np.abs(x) <= 2.0
        ii = np.ix_(inner, inner)
        defect = float(np.max(np.abs((K1 @ K1).kernel - K2.kernel)[ii]) / np.max(np.abs(K2.kernel)))
    ok = rel < 1e-8 and defect < 1e-7 and t.elapsed < 10.0
    report(7, ok, f"one-slice rel err {rel:.2e} (< 1e-8), semigroup defect {defect:.2e} (< 1e-7); {t.elapsed:.2f}s (< 10s)")


def _harmonic_convergence(order: int):
    js = compute_jacobi_series(Potential.harmonic(1, 1), order)
    grid = Grid1D(-4.0, 4.0, 128)
    x = grid.points
    total = -0.5j
    exact = harmonic_kernel(x[:, None], x[None, :], total).real
    inner = np.abs(x) <= 2.0
    ii = np.ix_(inner, inner)
    scale = np.max(np.abs(exact[ii]))
    slices = (16, 32, 64, 128, 256)
    errs = []
    for n in slices:
        K = build_slice_matrix(js, grid, total / n, QuadParams(scheme="band")).power(n)
        errs.append(float(np.max(np.abs(K.kernel - exact)[ii]) / scale))
    return errs, loglog_slope([1 / n for n in slices], errs)


def test_criterion_08_harmonic_convergence():
    with Timer() as t:
        errs, slope = _harmonic_convergence(1)
        errs8, slope8 = _harmonic_convergence(8)
    ok = errs[-1] < 1e-3 and slope >= 1.0 and errs8[-1] < 1e-3 and t.elapsed < 60.0
    report(8, ok,
           f"skeleton slices: err(N=256) {errs[-1]:.2e} (< 1e-3), order {slope:.2f} (>= 1); "
           f"order-8 slices: err(N=256) {errs8[-1]:.2e}, no slicing error left to fit (slope {slope8:.2f}); {t.elapsed:.1f}s (< 60s)")


def test_criterion_09_short_time_reduction():
    with Timer() as t:
        js = compute_jacobi_series(Potential.from_coeffs([(3, 1)]), 8)
        ladder = [0.2 / 2 ** k for k in range(5)]
        rows, slope = verify_short_time_reduction(js, ladder, 0.5, 0.3, QuadParams(scheme="contour", n_nodes=60, check=True, tol=1e-8))
        abs_slope = loglog_slope(ladder, [r["abs_err"] for r in rows])
    ok = slope >= 1.8 and t.elapsed < 30.0
    report(9, ok, f"relative discrepancy slope {slope:.3f} (>= 1.8), absolute slope {abs_slope:.3f}; {t.elapsed:.2f}s (< 30s)")


def test_criterion_10_relativistic():
    points = [(0.0, 1.0), (0.5, 1.0), (1.0, 1.0), (2.0, 2.0), (0.0, 5.0), (3.0, 4.0),
              (5.0, 3.0), (4.0, 8.0), (10.0, 5.0), (0.0, 20.0), (12.0, 16.0), (20.0, 22.0)]
    with Timer() as t:
        worst = 0.0
        zs = []
        for dq, beta in points:
            zs.append(math.hypot(beta, dq))
            val, _ = relativistic_momentum_integral(dq, beta)
            ref = newton_wigner_reference(dq, -1j * beta)
            worst = max(worst, abs(val - ref) / abs(ref))
    ok = worst < 1e-6 and min(zs) >= 1 and max(zs) <= 30 and len(points) == 12 and t.elapsed < 20.0
    report(10, ok, f"max rel err {worst:.2e} (< 1e-6) over 12 points, z in [{min(zs):.2f}, {max(zs):.2f}]; {t.elapsed:.2f}s (< 20s)")


def test_criterion_11_unitarity_hermiticity():
    with Timer() as t:
        grid = Grid1D(-8.0, 8.0, 128)
        psi = WaveState.from_function(grid, lambda x: gaussian_packet(x, 0.0, q0=0.5, p0=1.0, sigma=1.0))
        drift = herm = 0.0
        for coeffs in ([], [(2, Fraction(1, 2))], [(4, Fraction(1, 10)), (3, Fraction(1, 5))]):
            js = compute_jacobi_series(Potential.from_coeffs(coeffs), 6)
            Kp = build_slice_matrix(js, grid, 0.02)
            Km = build_slice_matrix(js, grid, -0.02)
            drift = max(drift, abs(propagate(psi, Kp).norm2() - psi.norm2()))
            herm = max(herm, float(np.max(np.abs(Kp.kernel.conj() - Km.kernel.T)) / np.max(np.abs(Kp.kernel))))
    ok = drift < 1e-4 and herm < 1e-4 and t.elapsed < 20.0
    report(11, ok, f"norm drift {drift:.2e} (< 1e-4), hermiticity defect {herm:.2e} (< 1e-4); {t.elapsed:.2f}s (< 20s)")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v", "-p", "no:cacheprovider"]))
