"""Short-time modes F_p = [(2 pi hbar)^-1 d2J/dqdp]^(1/2) exp(iJ/hbar) and their residuals.

The exponential is never expanded.  Applying ``i hbar d/dt + (hbar^2/2m) d^2/dq^2 - V``
to ``A exp(iJ/hbar)`` and dividing by the exponential leaves a tau-series in
which ``i`` appears explicitly; those coefficients are Gaussian rationals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .jacobi import JacobiSeries, Potential
from .series import I, PolyQP, TauSeries, series_inv, series_sqrt

__all__ = [
    "Mode",
    "ResidualReport",
    "build_mode",
    "schrodinger_residual",
    "residual_direct_check",
    "transport_residual",
]


@dataclass(frozen=True)
class Mode:
    prefactor: TauSeries
    phase: TauSeries
    potential: Potential
    norm_constant: float

    def evaluate(self, q, p, tau) -> complex:
        """Numeric value of F_p(q, tau) from the truncated series."""
        import cmath

        amp = self.prefactor.eval(q, p, tau)
        ph = self.phase.eval(q, p, tau)
        return self.norm_constant * amp * cmath.exp(1j * ph / float(self.potential.hbar))


@dataclass(frozen=True)
class ResidualReport:
    leading_order: float | int
    leading_coefficient: PolyQP
    full_residual: TauSeries


def build_mode(js: JacobiSeries) -> Mode:
    mixed = js.mixed_derivative()
    amp = series_sqrt(mixed)
    norm = 1.0 / math.sqrt(2.0 * math.pi * float(js.potential.hbar))
    return Mode(prefactor=amp, phase=js.j, potential=js.potential, norm_constant=norm)


def _report(series: TauSeries) -> ResidualReport:
    lead = series.leading_order()
    coeff = PolyQP() if lead == float("inf") else series[lead]
    return ResidualReport(lead, coeff, series)


def schrodinger_residual(mode: Mode) -> ResidualReport:
    """(hbar^2/2m) A^-1 d^2A/dq^2 for the prefactor A of the mode."""
    pot = mode.potential
    a = mode.prefactor
    res = series_inv(a) * a.diff("q").diff("q") * (pot.hbar ** 2 / (2 * pot.m))
    return _report(res)


def transport_residual(mode: Mode) -> TauSeries:
    """dA/dt + A_q J_q/m + A J_qq/(2m); vanishes through tau^(L-1) for an exact J."""
    m = mode.potential.m
    L = mode.phase.order - 1
    a = mode.prefactor.truncate(L)
    aq = a.diff("q")
    jq = mode.phase.diff("q").truncate(L)
    jqq = jq.diff("q")
    return mode.prefactor.diff_tau() + (aq * jq) / m + (a * jqq) / (2 * m)


def residual_direct_check(mode: Mode, pot: Potential | None = None) -> TauSeries:
    """Second route to the residual: formal differentiation of A exp(iJ/hbar).

    Returns ``direct/F_p - schrodinger_residual``; exact zero through
    ``tau^(L-1)`` when J solves the Hamilton-Jacobi equation.
    """
    pot = pot or mode.potential
    hbar, m = pot.hbar, pot.m
    L = mode.phase.order - 1
    a = mode.prefactor.truncate(L)
    j = mode.phase
    at = mode.prefactor.diff_tau()
    jt = j.diff_tau()
    jq = j.diff("q").truncate(L)
    jqq = jq.diff("q")
    aq = a.diff("q")
    aqq = aq.diff("q")
    ih = I * hbar
    direct = (
        at * ih
        - a * jt
        + aqq * (hbar ** 2 / (2 * m))
        + (aq * jq) * (ih / m)
        + (a * jqq) * (ih / (2 * m))
        - (a * jq * jq) / (2 * m)
        - a * pot.v
    )
    ratio = series_inv(a) * direct
    return ratio - schrodinger_residual(mode).full_residual.truncate(L)
