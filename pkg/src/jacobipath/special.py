"""Modified Bessel function K_1 for real positive arguments."""

from __future__ import annotations

import math

import numpy as np

__all__ = ["bessel_k1"]

_EULER_GAMMA = 0.57721566490153286061
_SERIES_MAX = 2.0


def _k1_series(x: float) -> float:
    # K_1(x) = 1/x + ln(x/2) I_1(x) - (x/4) sum_k [psi(k+1) + psi(k+2)] (x^2/4)^k / (k! (k+1)!)
    y = 0.25 * x * x
    term = 1.0  # (x^2/4)^k / (k! (k+1)!)
    psi1 = -_EULER_GAMMA  # psi(k+1)
    psi2 = 1.0 - _EULER_GAMMA  # psi(k+2)
    i1_sum = 0.0
    psi_sum = 0.0
    for k in range(60):
        i1_sum += term
        psi_sum += (psi1 + psi2) * term
        if term < 1e-18 * i1_sum:
            break
        term *= y / ((k + 1) * (k + 2))
        psi1 += 1.0 / (k + 1)
        psi2 += 1.0 / (k + 2)
    i1 = 0.5 * x * i1_sum
    return 1.0 / x + math.log(0.5 * x) * i1 - 0.25 * x * psi_sum


def _k1_integral(x: float) -> float:
    # K_1(x) = int_0^inf exp(-x cosh t) cosh t dt; trapezoid is spectrally accurate here
    h = min(0.125, 0.4 / math.sqrt(x))  # integrand width ~ 1/sqrt(x)
    t_max = math.acosh(max(1.0, 745.0 / x + 1.0)) + 1.0
    n = int(t_max / h) + 1
    t = np.arange(n + 1) * h
    f = np.exp(-x * (np.cosh(t) - 1.0)) * np.cosh(t)
    return float(h * (f.sum() - 0.5 * f[0])) * math.exp(-x)


def bessel_k1(x) -> float | np.ndarray:
    """K_1(x) for x > 0: power series below 2, trapezoidal integral representation above."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0):
        raise ValueError("bessel_k1 is implemented for positive real arguments only")
    flat = [(_k1_series(v) if v <= _SERIES_MAX else _k1_integral(v)) for v in arr.ravel()]
    out = np.array(flat).reshape(arr.shape)
    return float(out) if out.ndim == 0 else out
