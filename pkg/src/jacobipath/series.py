"""Exact polynomials in the commuting symbols (q, p) and truncated power series in tau.

Coefficients are :class:`fractions.Fraction` values.  Where a computation needs
the imaginary unit (the ``i/hbar`` of a phase factor) coefficients are promoted
to :class:`GaussQ`, a Gaussian rational; a ``GaussQ`` with zero imaginary part
is always stored back as a plain ``Fraction`` so equality stays structural.

Polynomial example::

    q**2 * p + 3  ->  PolyQP({(2, 1): Fraction(1), (0, 0): Fraction(3)})

A :class:`TauSeries` of truncation order ``L`` keeps the coefficients of
``tau**0 .. tau**L``; products are truncated at ``L`` and never grow past it.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterable, Mapping, Sequence, Union

import numpy as np

__all__ = [
    "GaussQ",
    "PolyQP",
    "TauSeries",
    "OrderMismatchError",
    "UnsupportedLeadingTermError",
    "poly_mul",
    "poly_diff",
    "series_mul",
    "series_sqrt",
    "series_inv",
    "series_eval",
    "to_exact",
]


class OrderMismatchError(ValueError):
    """Two series with different truncation orders were combined."""


class UnsupportedLeadingTermError(ValueError):
    """A series operation needs a unit constant term and did not get one."""


class GaussQ:
    """Exact complex rational ``re + i*im``."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _lift(x) -> "GaussQ":
        if isinstance(x, GaussQ):
            return x
        if isinstance(x, (int, Rational)):
            return GaussQ(x, 0)
        return NotImplemented

    def __add__(self, other):
        o = GaussQ._lift(other)
        if o is NotImplemented:
            return o
        return _canon(GaussQ(self.re + o.re, self.im + o.im))

    __radd__ = __add__

    def __neg__(self):
        return GaussQ(-self.re, -self.im)

    def __sub__(self, other):
        o = GaussQ._lift(other)
        if o is NotImplemented:
            return o
        return _canon(GaussQ(self.re - o.re, self.im - o.im))

    def __rsub__(self, other):
        o = GaussQ._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = GaussQ._lift(other)
        if o is NotImplemented:
            return o
        return _canon(GaussQ(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussQ._lift(other)
        if o is NotImplemented:
            return o
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("GaussQ division by zero")
        num = self * o.conjugate()
        num = GaussQ._lift(num)
        return _canon(GaussQ(num.re / den, num.im / den))

    def __rtruediv__(self, other):
        o = GaussQ._lift(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("GaussQ supports non-negative integer powers only")
        out = GaussQ(1)
        for _ in range(n):
            out = GaussQ._lift(out * self)
        return _canon(out)

    def conjugate(self) -> "GaussQ":
        return GaussQ(self.re, -self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        o = GaussQ._lift(other)
        if o is NotImplemented:
            if isinstance(other, complex):
                return complex(self) == other
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussQ({self.re}, {self.im})"

    def __str__(self):
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"


I = GaussQ(0, 1)

Coeff = Union[Fraction, GaussQ]


def _canon(x):
    if isinstance(x, GaussQ) and x.im == 0:
        return x.re
    return x


def to_exact(x) -> Coeff:
    """Coerce ints, Fractions, decimal strings and GaussQ to an exact coefficient."""
    if isinstance(x, GaussQ):
        return _canon(x)
    if isinstance(x, float):
        raise TypeError("floats are not accepted in the exact layer; pass a Fraction or string")
    return Fraction(x)


def _conj(x):
    return x.conjugate() if isinstance(x, GaussQ) else x


class PolyQP:
    """Sparse polynomial in q and p with exact coefficients.

    ``terms`` maps ``(deg_q, deg_p)`` to a nonzero coefficient.  Instances are
    immutable; the term map is copied and zero coefficients are dropped.
    """

    __slots__ = ("_terms", "_key")

    def __init__(self, terms: Mapping[tuple[int, int], object] | None = None):
        clean = {}
        for (a, b), c in (terms or {}).items():
            if a < 0 or b < 0:
                raise ValueError("negative exponent")
            c = to_exact(c)
            if c != 0:
                clean[(int(a), int(b))] = c
        self._terms = clean
        self._key = tuple(sorted(clean.items()))

    # constructors ------------------------------------------------------
    @classmethod
    def const(cls, c) -> "PolyQP":
        return cls({(0, 0): c})

    @classmethod
    def q(cls) -> "PolyQP":
        return cls({(1, 0): 1})

    @classmethod
    def p(cls) -> "PolyQP":
        return cls({(0, 1): 1})

    @classmethod
    def monomial(cls, deg_q: int, deg_p: int, c=1) -> "PolyQP":
        return cls({(deg_q, deg_p): c})

    @classmethod
    def from_q_coeffs(cls, coeffs: Iterable[tuple[int, object]]) -> "PolyQP":
        """Build a potential-like polynomial from ``(degree, coefficient)`` pairs."""
        acc: dict[tuple[int, int], Coeff] = {}
        for deg, c in coeffs:
            key = (int(deg), 0)
            acc[key] = acc.get(key, Fraction(0)) + to_exact(c)
        return cls(acc)

    # introspection -----------------------------------------------------
    @property
    def terms(self) -> dict[tuple[int, int], Coeff]:
        return dict(self._terms)

    def items(self):
        return self._key

    def coefficient(self, deg_q: int, deg_p: int) -> Coeff:
        return self._terms.get((deg_q, deg_p), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def deg_q(self) -> int:
        return max((a for a, _ in self._terms), default=-1)

    @property
    def deg_p(self) -> int:
        return max((b for _, b in self._terms), default=-1)

    def p_part(self, deg_p: int) -> "PolyQP":
        """Terms whose p-degree equals ``deg_p``."""
        return PolyQP({k: c for k, c in self._terms.items() if k[1] == deg_p})

    def __len__(self):
        return len(self._terms)

    # arithmetic --------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, PolyQP):
            return self._key == other._key
        if isinstance(other, (int, Rational, GaussQ)):
            return self == PolyQP.const(other)
        return NotImplemented

    def __hash__(self):
        return hash(self._key)

    def __add__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, Fraction(0)) + c
        return PolyQP(out)

    __radd__ = __add__

    def __neg__(self):
        return PolyQP({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Rational, GaussQ)):
            c = to_exact(other)
            return PolyQP({k: v * c for k, v in self._terms.items()})
        if isinstance(other, PolyQP):
            return poly_mul(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Rational, GaussQ)):
            c = to_exact(other)
            return PolyQP({k: v / c for k, v in self._terms.items()})
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = PolyQP.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def diff(self, var: str, times: int = 1) -> "PolyQP":
        out = self
        for _ in range(times):
            out = poly_diff(out, var)
        return out

    def integrate_q(self) -> "PolyQP":
        """Antiderivative in q with zero constant of integration."""
        return PolyQP({(a + 1, b): c / (a + 1) for (a, b), c in self._terms.items()})

    def conjugate(self) -> "PolyQP":
        return PolyQP({k: _conj(c) for k, c in self._terms.items()})

    def divide_by_p(self) -> "PolyQP":
        """Exact division by p; every term must carry at least one power of p."""
        if any(b == 0 for _, b in self._terms):
            raise ValueError("polynomial is not divisible by p")
        return PolyQP({(a, b - 1): c for (a, b), c in self._terms.items()})

    def substitute_q(self, shift: "PolyQP") -> "PolyQP":
        """Compose: replace q by ``shift`` (a polynomial in q and p)."""
        out = PolyQP()
        powers: dict[int, PolyQP] = {0: PolyQP.const(1)}
        for (a, b), c in self._key:
            if a not in powers:
                powers[a] = shift ** a
            out = out + powers[a] * PolyQP.monomial(0, b, c)
        return out

    # evaluation --------------------------------------------------------
    def eval(self, q, p) -> complex:
        """Numeric value by Horner's rule in q for each p-power, then in p."""
        if not self._terms:
            return 0.0
        dp = self.deg_p
        acc = 0.0
        for b in range(dp, -1, -1):
            row = [(a, c) for (a, bb), c in self._key if bb == b]
            inner = 0.0
            if row:
                dq = max(a for a, _ in row)
                coeffs = dict(row)
                for a in range(dq, -1, -1):
                    inner = inner * q + _num(coeffs.get(a, 0))
            acc = acc * p + inner
        return acc

    def eval_exact(self, q, p) -> Coeff:
        acc = Fraction(0)
        for (a, b), c in self._key:
            acc = acc + c * (to_exact(q) ** a) * (to_exact(p) ** b)
        return _canon(acc)

    def __repr__(self):
        return f"PolyQP({dict(self._key)!r})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for (a, b), c in sorted(self._key, key=lambda kv: (-(kv[0][0] + kv[0][1]), kv[0])):
            mono = "*".join(x for x in (_sym("q", a), _sym("p", b)) if x)
            parts.append(f"{c}*{mono}" if mono else f"{c}")
        return " + ".join(parts)


def _sym(name: str, n: int) -> str:
    if n == 0:
        return ""
    return name if n == 1 else f"{name}^{n}"


def _num(c) -> complex:
    if isinstance(c, GaussQ):
        return complex(c)
    return float(c)


def _as_poly(x):
    if isinstance(x, PolyQP):
        return x
    if isinstance(x, (int, Rational, GaussQ)):
        return PolyQP.const(x)
    return NotImplemented


def poly_mul(a: PolyQP, b: PolyQP) -> PolyQP:
    """Exact product of two polynomials."""
    out: dict[tuple[int, int], Coeff] = {}
    for (a1, b1), c1 in a._key:
        for (a2, b2), c2 in b._key:
            k = (a1 + a2, b1 + b2)
            out[k] = out.get(k, Fraction(0)) + c1 * c2
    return PolyQP(out)


def poly_diff(a: PolyQP, var: str) -> PolyQP:
    """Exact partial derivative with respect to ``'q'`` or ``'p'``."""
    if var == "q":
        return PolyQP({(i - 1, j): c * i for (i, j), c in a._key if i > 0})
    if var == "p":
        return PolyQP({(i, j - 1): c * j for (i, j), c in a._key if j > 0})
    raise ValueError(f"unknown variable {var!r}")


class TauSeries:
    """Power series in tau truncated at order ``L`` with :class:`PolyQP` coefficients."""

    __slots__ = ("_c", "order")

    def __init__(self, coefficients: Sequence[PolyQP | object], order: int | None = None):
        coeffs = [c if isinstance(c, PolyQP) else PolyQP.const(c) for c in coefficients]
        if order is None:
            order = len(coeffs) - 1
        if order < 0:
            raise ValueError("truncation order must be non-negative")
        if len(coeffs) > order + 1:
            if any(not c.is_zero() for c in coeffs[order + 1:]):
                raise ValueError("coefficients given beyond the truncation order")
            coeffs = coeffs[: order + 1]
        coeffs = coeffs + [PolyQP()] * (order + 1 - len(coeffs))
        self._c = tuple(coeffs)
        self.order = order

    @classmethod
    def constant(cls, poly, order: int) -> "TauSeries":
        return cls([poly], order)

    @classmethod
    def tau(cls, order: int) -> "TauSeries":
        return cls([PolyQP(), PolyQP.const(1)], order)

    @property
    def coefficients(self) -> tuple[PolyQP, ...]:
        return self._c

    @property
    def truncation_order(self) -> int:
        return self.order

    def __getitem__(self, l: int) -> PolyQP:
        return self._c[l]

    def __len__(self):
        return len(self._c)

    def __iter__(self):
        return iter(self._c)

    def __eq__(self, other):
        if isinstance(other, TauSeries):
            return self.order == other.order and self._c == other._c
        return NotImplemented

    def __hash__(self):
        return hash((self.order, self._c))

    def _check(self, other: "TauSeries"):
        if self.order != other.order:
            raise OrderMismatchError(f"truncation orders differ: {self.order} vs {other.order}")

    def _coerce(self, other):
        if isinstance(other, TauSeries):
            self._check(other)
            return other
        if isinstance(other, (int, Rational, GaussQ, PolyQP)):
            return TauSeries.constant(_as_poly(other), self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return TauSeries([a + b for a, b in zip(self._c, other._c)], self.order)

    __radd__ = __add__

    def __neg__(self):
        return TauSeries([-a for a in self._c], self.order)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, TauSeries):
            return series_mul(self, other)
        if isinstance(other, (int, Rational, GaussQ, PolyQP)):
            return TauSeries([a * other for a in self._c], self.order)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Rational, GaussQ)):
            return TauSeries([a / other for a in self._c], self.order)
        return NotImplemented

    def map(self, fn: Callable[[PolyQP], PolyQP]) -> "TauSeries":
        return TauSeries([fn(a) for a in self._c], self.order)

    def diff(self, var: str) -> "TauSeries":
        """Partial derivative in q or p, coefficient-wise."""
        return self.map(lambda a: poly_diff(a, var))

    def diff_tau(self) -> "TauSeries":
        """Derivative in tau.  The result is only known through ``tau**(L-1)``."""
        if self.order == 0:
            return TauSeries([PolyQP()], 0)
        return TauSeries([self._c[l] * l for l in range(1, self.order + 1)], self.order - 1)

    def truncate(self, order: int) -> "TauSeries":
        if order > self.order:
            raise OrderMismatchError("cannot extend a series past its truncation order")
        return TauSeries(self._c[: order + 1], order)

    def scale_tau(self, factor) -> "TauSeries":
        """Substitute tau -> factor * tau."""
        f = to_exact(factor)
        out, fl = [], Fraction(1)
        for a in self._c:
            out.append(a * fl)
            fl = fl * f
        return TauSeries(out, self.order)

    def leading_order(self) -> float | int:
        """Smallest l with a nonzero coefficient, or ``inf`` for the zero series."""
        for l, a in enumerate(self._c):
            if not a.is_zero():
                return l
        return float("inf")

    def is_zero(self, through: int | None = None) -> bool:
        n = self.order if through is None else through
        return all(a.is_zero() for a in self._c[: n + 1])

    def sqrt(self) -> "TauSeries":
        return series_sqrt(self)

    def inv(self) -> "TauSeries":
        return series_inv(self)

    def eval(self, q, p, tau) -> complex:
        return series_eval(self, q, p, tau)

    def to_array(self) -> np.ndarray:
        """Dense complex array ``C[l, a, b]`` of the coefficient of tau^l q^a p^b."""
        dq = max((c.deg_q for c in self._c), default=0)
        dp = max((c.deg_p for c in self._c), default=0)
        arr = np.zeros((self.order + 1, max(dq, 0) + 1, max(dp, 0) + 1), dtype=complex)
        for l, c in enumerate(self._c):
            for (a, b), v in c.items():
                arr[l, a, b] = _num(v)
        return arr

    def __repr__(self):
        return f"TauSeries({list(self._c)!r}, order={self.order})"

    def __str__(self):
        parts = [f"({c})*tau^{l}" for l, c in enumerate(self._c) if not c.is_zero()]
        return " + ".join(parts) if parts else "0"


def series_mul(a: TauSeries, b: TauSeries) -> TauSeries:
    """Cauchy product truncated at the common order."""
    a._check(b)
    L = a.order
    out = []
    for n in range(L + 1):
        acc = PolyQP()
        for k in range(n + 1):
            if a[k].is_zero() or b[n - k].is_zero():
                continue
            acc = acc + a[k] * b[n - k]
        out.append(acc)
    return TauSeries(out, L)


def _require_unit(a: TauSeries, what: str):
    if a[0] != PolyQP.const(1):
        raise UnsupportedLeadingTermError(f"{what} needs a constant term equal to 1, got {a[0]}")


def series_sqrt(a: TauSeries) -> TauSeries:
    """Square root by coefficient matching; requires ``a[0] == 1``."""
    _require_unit(a, "series_sqrt")
    b = [PolyQP.const(1)]
    for n in range(1, a.order + 1):
        acc = a[n]
        for k in range(1, n):
            acc = acc - b[k] * b[n - k]
        b.append(acc / 2)
    return TauSeries(b, a.order)


def series_inv(a: TauSeries) -> TauSeries:
    """Multiplicative inverse; requires ``a[0] == 1``."""
    _require_unit(a, "series_inv")
    c = [PolyQP.const(1)]
    for n in range(1, a.order + 1):
        acc = PolyQP()
        for k in range(1, n + 1):
            if not a[k].is_zero():
                acc = acc - a[k] * c[n - k]
        c.append(acc)
    return TauSeries(c, a.order)


def series_eval(a: TauSeries, q0, p0, tau0) -> complex:
    """Numeric value: Horner in tau over coefficients evaluated at (q0, p0)."""
    acc = 0.0
    for c in reversed(a.coefficients):
        acc = acc * tau0 + c.eval(q0, p0)
    return acc
