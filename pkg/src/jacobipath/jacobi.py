"""Jacobi principal function J(q, p, tau) for H = p^2/2m + V(q) as an exact tau-series.

Convention: the series stored here is ``J = sum_l J_l tau^l`` with ``J_0 = p q``
and ``J_1 = -p^2/(2m) - V(q)``, i.e. the kinetic term is folded into ``J_1``.
The higher coefficients follow from the Hamilton-Jacobi equation

    dJ/dtau + (dJ/dq)^2 / 2m + V = 0

order by order:  ``(l+1) J_{l+1} = -(1/2m) sum_{k=0}^{l} J_k' J_{l-k}'`` for
``l >= 1``.  The kinetic part of ``J_1`` has no q-dependence, so it never
enters a q-derivative and the coefficients for ``l >= 2`` are the same whether
or not it is folded in.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .series import PolyQP, TauSeries, to_exact

__all__ = [
    "Potential",
    "JacobiSeries",
    "compute_jacobi_series",
    "hj_residual",
    "harmonic_closed_form",
    "tan_sec_coefficients",
    "resummation_check",
    "leading_p_part",
    "resummed_leading_part",
    "skeleton_phase",
    "swap_relation_check",
]


@dataclass(frozen=True)
class Potential:
    """Polynomial potential V(q) with mass and hbar as exact rationals."""

    v: PolyQP
    m: Fraction = Fraction(1)
    hbar: Fraction = Fraction(1)

    def __post_init__(self):
        if not isinstance(self.v, PolyQP):
            raise TypeError("v must be a PolyQP")
        if self.v.deg_p > 0:
            raise ValueError("potential must not depend on p")
        object.__setattr__(self, "m", to_exact(self.m))
        object.__setattr__(self, "hbar", to_exact(self.hbar))
        if self.m <= 0 or self.hbar <= 0:
            raise ValueError("m and hbar must be positive")

    @classmethod
    def from_coeffs(cls, coeffs, m=1, hbar=1) -> "Potential":
        """``coeffs`` is an iterable of ``(degree, coefficient)`` pairs."""
        return cls(PolyQP.from_q_coeffs(coeffs), Fraction(m), Fraction(hbar))

    @classmethod
    def harmonic(cls, m=1, omega=1, hbar=1) -> "Potential":
        m, omega = to_exact(m), to_exact(omega)
        return cls(PolyQP.monomial(2, 0, m * omega * omega / 2), m, to_exact(hbar))

    @classmethod
    def free(cls, m=1, hbar=1) -> "Potential":
        return cls(PolyQP(), to_exact(m), to_exact(hbar))

    def derivative(self, n: int = 1) -> PolyQP:
        return self.v.diff("q", n)

    @property
    def degree(self) -> int:
        return self.v.deg_q

    def hamiltonian(self) -> PolyQP:
        return PolyQP.monomial(0, 2, 1 / (2 * self.m)) + self.v

    def __call__(self, q) -> complex:
        return self.v.eval(q, 0)


@dataclass(frozen=True)
class JacobiSeries:
    j: TauSeries
    potential: Potential

    @property
    def order(self) -> int:
        return self.j.order

    def coefficient(self, l: int) -> PolyQP:
        return self.j[l]

    def mixed_derivative(self) -> TauSeries:
        """d^2 J / dq dp as a tau-series."""
        return self.j.diff("q").diff("p")


def compute_jacobi_series(pot: Potential, L: int = 8) -> JacobiSeries:
    if L < 1:
        raise ValueError("truncation order must be at least 1")
    m = pot.m
    coeffs = [PolyQP.monomial(1, 1), -pot.hamiltonian()]
    dq = [coeffs[0].diff("q"), coeffs[1].diff("q")]
    for l in range(1, L):
        acc = PolyQP()
        # symmetric sum: pair k with l-k once
        for k in range(0, (l + 1) // 2):
            acc = acc + dq[k] * dq[l - k] * 2
        if l % 2 == 0:
            acc = acc + dq[l // 2] * dq[l // 2]
        nxt = acc * Fraction(-1, 2 * (l + 1)) / m
        coeffs.append(nxt)
        dq.append(nxt.diff("q"))
    return JacobiSeries(TauSeries(coeffs, L), pot)


def hj_residual(js: JacobiSeries) -> TauSeries:
    """dJ/dtau + (dJ/dq)^2/2m + V, valid through tau^(L-1)."""
    L = js.order
    pot = js.potential
    jt = js.j.diff_tau()
    jq = js.j.diff("q").truncate(L - 1)
    return jt + (jq * jq) / (2 * pot.m) + pot.v


def tan_sec_coefficients(n: int) -> tuple[list[Fraction], list[Fraction]]:
    """Taylor coefficients of tan x and sec x through x^n.

    Generated from tan' = 1 + tan^2 and sec' = sec tan.
    """
    t = [Fraction(0)] * (n + 1)
    s = [Fraction(0)] * (n + 1)
    s[0] = Fraction(1)
    for k in range(n):
        tt = sum((t[i] * t[k - i] for i in range(k + 1)), Fraction(0))
        if k == 0:
            tt += 1
        t[k + 1] = tt / (k + 1)
        st = sum((s[i] * t[k - i] for i in range(k + 1)), Fraction(0))
        s[k + 1] = st / (k + 1)
    return t, s


def harmonic_closed_form(m, omega, L: int = 8, hbar=1) -> JacobiSeries:
    """Series expansion of J = -p^2 tan(w t)/(2 m w) + q p / cos(w t) - m w q^2 tan(w t)/2."""
    m, omega = to_exact(m), to_exact(omega)
    t, s = tan_sec_coefficients(L)
    coeffs = []
    for l in range(L + 1):
        wl = omega ** l
        c = (PolyQP.monomial(0, 2, -t[l] * wl / (2 * m * omega))
             + PolyQP.monomial(1, 1, s[l] * wl)
             + PolyQP.monomial(2, 0, -m * omega * t[l] * wl / 2))
        coeffs.append(c)
    return JacobiSeries(TauSeries(coeffs, L), Potential.harmonic(m, omega, hbar))


def leading_p_part(js: JacobiSeries) -> TauSeries:
    """For each l >= 1 keep only the p^(l-1) terms of J_l."""
    out = [PolyQP()]
    for l in range(1, js.order + 1):
        out.append(js.j[l].p_part(l - 1))
    return TauSeries(out, js.order)


def resummed_leading_part(pot: Potential, L: int) -> TauSeries:
    """(m/p) * integral_q^{q - p tau/m} V as a tau-series.

    Computed from the antiderivative W of V: W(q + h) - W(q) with h = -p tau/m,
    expanded exactly, then divided by p.
    """
    m = pot.m
    w = pot.v.integrate_q()
    # W(q + h) as a polynomial in (q, p) for each tau-power: h^n = (-p/m)^n tau^n
    out = [PolyQP() for _ in range(L + 1)]
    fact = Fraction(1)
    deriv = w
    for n in range(0, L + 1):
        if n > 0:
            deriv = deriv.diff("q")
            fact *= n
        if deriv.is_zero():
            break
        if n == 0:
            continue
        term = deriv * PolyQP.monomial(0, n, (Fraction(-1) / m) ** n / fact)
        out[n] = out[n] + term.divide_by_p() * m
    return TauSeries(out, L)


def resummation_check(pot: Potential, L: int = 6) -> TauSeries:
    """Difference between the top-p-degree terms of J and the resummed closed form."""
    js = compute_jacobi_series(pot, L)
    return leading_p_part(js) - resummed_leading_part(pot, L)


def skeleton_phase(js: JacobiSeries, q2, q1, p) -> list:
    """Coefficients (in powers of eps) of J(q2, p, eps/2) - J(q1, p, -eps/2), exact."""
    out = []
    for l, c in enumerate(js.j):
        half = Fraction(1, 2) ** l
        out.append(c.eval_exact(q2, p) * half - c.eval_exact(q1, p) * half * (-1) ** l)
    return out


def swap_relation_check(js: JacobiSeries, samples: int = 8, seed: int = 0) -> bool:
    """Mid-time skeleton piece reproduces the identity generator and the mean Hamiltonian.

    At random rational points checks that in J(q'', p, eps/2) - J(q', p, -eps/2)
    the eps^0 coefficient is p (q'' - q') and the eps^1 coefficient is
    -[H(q'', p) + H(q', p)]/2.
    """
    rng = random.Random(seed)
    h = js.potential.hamiltonian()
    for _ in range(samples):
        q2, q1, p = (Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(3))
        c = skeleton_phase(js, q2, q1, p)
        if c[0] != p * (q2 - q1):
            return False
        if js.order >= 1 and c[1] != -(h.eval_exact(q2, p) + h.eval_exact(q1, p)) / 2:
            return False
    return True
