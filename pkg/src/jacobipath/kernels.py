"""Closed-form reference kernels and the relativistic momentum integral.

Branch convention: every square root of a complex prefactor is the principal
one, so for real positive time ``1/sqrt(i) = exp(-i pi/4)`` and for Euclidean
time ``t = -i beta`` the free and harmonic kernels are real and positive.
"""

from __future__ import annotations

import cmath
import math
import warnings

import numpy as np
from scipy import integrate

from .jacobi import Potential
from .special import bessel_k1

__all__ = [
    "SingularKernelError",
    "UnsupportedRegionError",
    "short_time_reference",
    "mean_potential",
    "van_vleck_reference",
    "free_kernel",
    "harmonic_kernel",
    "newton_wigner_reference",
    "relativistic_momentum_integral",
    "gaussian_packet",
]


class SingularKernelError(ValueError):
    """The kernel is evaluated at a caustic."""


class UnsupportedRegionError(ValueError):
    """The requested argument lies outside the implemented region."""


def mean_potential(pot: Potential, q2, q1):
    """(1/dq) * integral_{q1}^{q2} V, with the limit V(q1) at dq = 0."""
    q2 = np.asarray(q2, dtype=float)
    q1 = np.asarray(q1, dtype=float)
    w = pot.v.integrate_q()
    dq = q2 - q1
    small = np.abs(dq) < 1e-12
    safe = np.where(small, 1.0, dq)
    vbar = (_poly_q(w, q2) - _poly_q(w, q1)) / safe
    return np.where(small, _poly_q(pot.v, q1), vbar)


def _poly_q(poly, q):
    coeffs = np.zeros(max(poly.deg_q, 0) + 1)
    for (a, _), c in poly.items():
        coeffs[a] = float(c)
    return np.polynomial.polynomial.polyval(q, coeffs)


def short_time_reference(q2, q1, eps, pot: Potential):
    """sqrt(m / 2 i pi hbar eps) exp{(i/hbar)[m dq^2 / 2 eps - eps Vbar]}."""
    m, hbar = float(pot.m), float(pot.hbar)
    eps = complex(eps)
    dq = np.asarray(q2, dtype=float) - np.asarray(q1, dtype=float)
    pref = np.sqrt(m / (2j * math.pi * hbar * eps))
    phase = m * dq ** 2 / (2 * eps) - eps * mean_potential(pot, q2, q1)
    return pref * np.exp(1j * phase / hbar)


def free_kernel(q2, q1, t, m=1.0, hbar=1.0):
    dq = np.asarray(q2, dtype=float) - np.asarray(q1, dtype=float)
    t = complex(t)
    if t == 0:
        raise SingularKernelError("free kernel at t = 0")
    action = m * dq ** 2 / (2 * t)
    mixed = -m / t
    return np.sqrt(1j * mixed / (2 * math.pi * hbar)) * np.exp(1j * action / hbar)


def harmonic_kernel(q2, q1, t, m=1.0, omega=1.0, hbar=1.0):
    t = complex(t)
    s = cmath.sin(omega * t)
    if abs(s) < 1e-14:
        raise SingularKernelError(f"caustic: sin(omega t) = 0 at omega t = {omega * t}")
    c = cmath.cos(omega * t)
    q2 = np.asarray(q2, dtype=float)
    q1 = np.asarray(q1, dtype=float)
    action = m * omega / (2 * s) * ((q1 ** 2 + q2 ** 2) * c - 2 * q1 * q2)
    mixed = -m * omega / s
    return np.sqrt(1j * mixed / (2 * math.pi * hbar)) * np.exp(1j * action / hbar)


def van_vleck_reference(system: str, q2, q1, T, m=1.0, omega=1.0, hbar=1.0):
    """[i/(2 pi hbar) d2S/dq''dq']^(1/2) exp(iS/hbar) for the free or harmonic action."""
    if system == "free":
        return free_kernel(q2, q1, T, m, hbar)
    if system == "harmonic":
        return harmonic_kernel(q2, q1, T, m, omega, hbar)
    raise ValueError(f"unknown system {system!r}")


def newton_wigner_reference(dq, dt, m=1.0, c=1.0, hbar=1.0):
    """Relativistic free kernel in 1+1 dimensions on the Euclidean section dt = -i beta.

    With R = sqrt(c^2 beta^2 + dq^2) the Bessel argument iS/hbar = m c R / hbar is
    real positive and the kernel is ``(m c^2 beta / (pi hbar R)) K_1(m c R / hbar)``.
    """
    dt = complex(dt)
    if abs(dt.real) > 1e-15 * max(1.0, abs(dt)) or dt.imag >= 0:
        raise UnsupportedRegionError("only Euclidean times dt = -i beta with beta > 0 are supported")
    beta = -dt.imag
    dq = np.asarray(dq, dtype=float)
    r = np.sqrt(c * c * beta * beta + dq * dq)
    z = m * c * r / hbar
    # -dt m^2 c^3 / (pi hbar S) with S = -i m c R reduces to -(m c^2 beta)/(pi hbar R);
    # the overall sign is fixed by positivity of the Euclidean kernel.
    return m * c * c * beta / (math.pi * hbar * r) * bessel_k1(z)


def relativistic_momentum_integral(dq, beta, m=1.0, c=1.0, hbar=1.0, epsrel=1e-12, limit=400):
    """int dp/(2 pi hbar) exp[i p dq/hbar - beta c sqrt(p^2 + m^2 c^2)/hbar].

    The contour is shifted to Im p = m c dq / R, through the saddle point, where
    the integrand has no exponential cancellation.  Returns (value, error estimate);
    roundoff warnings from the adaptive rule are silenced, the estimate carries that information.
    """
    if beta <= 0:
        raise UnsupportedRegionError("beta must be positive")
    dq = float(dq)
    r = math.sqrt(c * c * beta * beta + dq * dq)
    y = m * c * dq / r
    mc2 = (m * c) ** 2

    def f(s):
        p = complex(s, y)
        return cmath.exp((1j * p * dq - beta * c * cmath.sqrt(p * p + mc2)) / hbar)

    # f(-s) = conj(f(s)), so the integral over the line is 2 Re int_0^inf
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(lambda s: f(s).real, 0.0, np.inf, epsabs=0.0, epsrel=epsrel, limit=limit)
    return 2.0 * val / (2 * math.pi * hbar), 2.0 * err / (2 * math.pi * hbar)


def gaussian_packet(q, t, q0=0.0, p0=0.0, sigma=1.0, m=1.0, hbar=1.0):
    """Free evolution of a minimum-uncertainty packet, exact; normalized at t = 0."""
    q = np.asarray(q, dtype=float)
    t = complex(t)
    s_t = sigma * (1 + 1j * hbar * t / (2 * m * sigma ** 2))
    norm = (2 * math.pi * sigma ** 2) ** -0.25 * np.sqrt(sigma / s_t)
    x = q - q0 - p0 * t / m
    return norm * np.exp(-x ** 2 / (4 * sigma * s_t) + 1j * p0 * (q - q0 - p0 * t / (2 * m)) / hbar)
