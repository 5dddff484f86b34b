"""Noncommutative polynomials in q^, p^ with [q^, p^] = i hbar, and quantization rules.

Words are strings over the alphabet ``"q"``, ``"p"`` read left to right, so
``"pq"`` is the operator p^ q^.  Coefficients are polynomials in hbar
(:class:`HPoly`) whose coefficients are exact Gaussian rationals.

A quantization rule is encoded by the Taylor coefficients ``c_j`` of its
ordering function in the single variable ``x = hbar u v``.  Its action on a
monomial symbol ``q^m p^k`` is

    sum_N d_N hbar^N (d/dq)^N (d/dp)^N q^m p^k,
    d_N = sum_{j+n=N} c_j (-i/2)^n / n!

read as a normal-ordered operator (all q^ to the left).  The identification
``x -> hbar d^2/dqdp`` is the one under which every row of the classical
table (Standard, Anti-Standard, Symmetric, Weyl, Born-Jordan) is reproduced.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Callable, Iterable, Mapping

from .series import GaussQ, I, to_exact

__all__ = [
    "HPoly",
    "OperatorPoly",
    "NormalForm",
    "OrderingRule",
    "normal_order",
    "quantize",
    "induced_operator",
    "verify_induced_rule",
    "hermiticity_check",
    "classical_limit_check",
    "adjoint",
    "RULES",
    "table_operator",
    "STANDARD",
    "ANTI_STANDARD",
    "SYMMETRIC",
    "WEYL",
    "BORN_JORDAN",
    "INDUCED",
]


def _c(x):
    return x.conjugate() if isinstance(x, GaussQ) else x


class HPoly:
    """Polynomial in hbar: ``{power: coefficient}``, zero coefficients dropped."""

    __slots__ = ("_t",)

    def __init__(self, terms: Mapping[int, object] | None = None):
        t = {}
        for k, v in (terms or {}).items():
            v = to_exact(v)
            if v != 0:
                t[int(k)] = v
        self._t = t

    @classmethod
    def const(cls, c) -> "HPoly":
        return cls({0: c})

    @classmethod
    def hbar(cls, power: int = 1, c=1) -> "HPoly":
        return cls({power: c})

    def items(self):
        return sorted(self._t.items())

    def is_zero(self):
        return not self._t

    def __eq__(self, other):
        if isinstance(other, HPoly):
            return self._t == other._t
        if isinstance(other, (int, Fraction, GaussQ)):
            return self == HPoly.const(other)
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self.items()))

    def __add__(self, other):
        other = _as_h(other)
        out = dict(self._t)
        for k, v in other._t.items():
            out[k] = out.get(k, Fraction(0)) + v
        return HPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return HPoly({k: -v for k, v in self._t.items()})

    def __sub__(self, other):
        return self + (-_as_h(other))

    def __mul__(self, other):
        other = _as_h(other)
        out: dict[int, object] = {}
        for k1, v1 in self._t.items():
            for k2, v2 in other._t.items():
                out[k1 + k2] = out.get(k1 + k2, Fraction(0)) + v1 * v2
        return HPoly(out)

    __rmul__ = __mul__

    def conjugate(self) -> "HPoly":
        return HPoly({k: _c(v) for k, v in self._t.items()})

    def eval(self, hbar) -> complex:
        return sum(complex(v) * hbar ** k for k, v in self._t.items())

    def __repr__(self):
        return f"HPoly({dict(self.items())!r})"

    def __str__(self):
        if not self._t:
            return "0"
        return " + ".join(f"{v}*hbar^{k}" if k else f"{v}" for k, v in self.items())


def _as_h(x) -> HPoly:
    return x if isinstance(x, HPoly) else HPoly.const(x)


def _accumulate(out: dict, key, coeff: HPoly):
    cur = out.get(key)
    out[key] = coeff if cur is None else cur + coeff


class OperatorPoly:
    """Linear combination of words in q^, p^; words are kept exactly as given."""

    __slots__ = ("_t",)

    def __init__(self, terms: Mapping[str, object] | None = None):
        t = {}
        for w, c in (terms or {}).items():
            if set(w) - {"q", "p"}:
                raise ValueError(f"bad word {w!r}")
            c = _as_h(c)
            if not c.is_zero():
                t[w] = c
        self._t = t

    @classmethod
    def word(cls, w: str, c=1) -> "OperatorPoly":
        return cls({w: c})

    @property
    def terms(self) -> dict[str, HPoly]:
        return dict(self._t)

    def __add__(self, other: "OperatorPoly"):
        out = dict(self._t)
        for w, c in other._t.items():
            _accumulate(out, w, c)
        return OperatorPoly(out)

    def __mul__(self, other):
        if isinstance(other, OperatorPoly):
            out: dict = {}
            for w1, c1 in self._t.items():
                for w2, c2 in other._t.items():
                    _accumulate(out, w1 + w2, c1 * c2)
            return OperatorPoly(out)
        c = _as_h(other)
        return OperatorPoly({w: v * c for w, v in self._t.items()})

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)


@dataclass(frozen=True)
class NormalForm:
    """Operator written as ``sum c_ab q^a p^b`` with every q^ left of every p^."""

    terms: Mapping[tuple[int, int], HPoly] = field(default_factory=dict)

    def __post_init__(self):
        clean = {k: v for k, v in self.terms.items() if not v.is_zero()}
        object.__setattr__(self, "terms", clean)

    @classmethod
    def monomial(cls, a: int, b: int, c=1) -> "NormalForm":
        return cls({(a, b): _as_h(c)})

    def __eq__(self, other):
        if not isinstance(other, NormalForm):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __add__(self, other: "NormalForm") -> "NormalForm":
        out = dict(self.terms)
        for k, v in other.terms.items():
            _accumulate(out, k, v)
        return NormalForm(out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "NormalForm":
        c = _as_h(c)
        return NormalForm({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, NormalForm):
            return self.scale(other)
        out: dict = {}
        for (a, b), c1 in self.terms.items():
            for (c, d), c2 in other.terms.items():
                # q^a (p^b q^c) p^d
                for j in range(min(b, c) + 1):
                    w = Fraction(comb(b, j) * comb(c, j) * factorial(j))
                    coeff = c1 * c2 * HPoly.hbar(j, w * (-I) ** j)
                    _accumulate(out, (a + c - j, b - j + d), coeff)
        return NormalForm(out)

    def to_operator(self) -> OperatorPoly:
        return OperatorPoly({"q" * a + "p" * b: c for (a, b), c in self.terms.items()})

    def dump(self) -> list[dict]:
        """JSON-friendly listing of the terms."""
        rows = []
        for (a, b), c in sorted(self.terms.items()):
            for k, v in c.items():
                g = v if isinstance(v, GaussQ) else GaussQ(v)
                rows.append({"q": a, "p": b, "hbar": k, "re": str(g.re), "im": str(g.im)})
        return rows

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*q^{a}p^{b}" for (a, b), c in sorted(self.terms.items()))


def _word_normal(w: str) -> NormalForm:
    out = NormalForm.monomial(0, 0)
    for ch in w:
        out = out * (NormalForm.monomial(1, 0) if ch == "q" else NormalForm.monomial(0, 1))
    return out


def normal_order(x: OperatorPoly | str) -> NormalForm:
    """Unique normal form using p^b q^c = sum_j C(b,j) C(c,j) j! (-i hbar)^j q^(c-j) p^(b-j)."""
    if isinstance(x, str):
        x = OperatorPoly.word(x)
    out = NormalForm()
    for w, c in x.terms.items():
        out = out + _word_normal(w).scale(c)
    return out


def adjoint(x: NormalForm) -> NormalForm:
    """Reverse every word and conjugate coefficients (hbar real), then reorder."""
    out = NormalForm()
    for (a, b), c in x.terms.items():
        out = out + (NormalForm.monomial(0, b) * NormalForm.monomial(a, 0)).scale(c.conjugate())
    return out


def hermiticity_check(x: NormalForm) -> bool:
    return adjoint(x) == x


@dataclass(frozen=True)
class OrderingRule:
    """Ordering function as exact Taylor coefficients in x = hbar u v."""

    name: str
    coefficients: tuple
    exact: bool = False  # True when the listed coefficients are the whole function

    def coefficient(self, j: int):
        return self.coefficients[j] if j < len(self.coefficients) else Fraction(0)

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1


def _series_rule(name: str, gen: Callable[[int], object], order: int = 12) -> OrderingRule:
    return OrderingRule(name, tuple(to_exact(gen(j)) for j in range(order + 1)))


def _exp_coeff(a):
    return lambda j: (a ** j) * Fraction(1, factorial(j))


def _cos_half(j):
    # cos(x/2) = sum (-1)^n (x/2)^(2n) / (2n)!
    if j % 2:
        return 0
    return Fraction((-1) ** (j // 2), 2 ** j * factorial(j))


def _sinc_half(j):
    # 2 sin(x/2)/x = sum (-1)^n (x/2)^(2n) / (2n+1)!
    if j % 2:
        return 0
    return Fraction((-1) ** (j // 2), 2 ** j * factorial(j + 1))


def _induced(j):
    # cos(x/2) + (x/2) sin(x/2); (x/2) sin(x/2) = sum (-1)^n (x/2)^(2n+2)/(2n+1)!
    if j % 2:
        return 0
    extra = 0 if j == 0 else Fraction((-1) ** (j // 2 - 1), 2 ** j * factorial(j - 1))
    return _cos_half(j) + extra


STANDARD = _series_rule("standard", _exp_coeff(GaussQ(0, Fraction(1, 2))))
ANTI_STANDARD = _series_rule("anti-standard", _exp_coeff(GaussQ(0, Fraction(-1, 2))))
SYMMETRIC = _series_rule("symmetric", _cos_half)
WEYL = OrderingRule("weyl", (Fraction(1),), exact=True)
BORN_JORDAN = _series_rule("born-jordan", _sinc_half)
INDUCED = _series_rule("induced", _induced)

RULES = {r.name: r for r in (STANDARD, ANTI_STANDARD, SYMMETRIC, WEYL, BORN_JORDAN, INDUCED)}


def quantize_symbol(symbol: Mapping[tuple[int, int], object], rule: OrderingRule) -> NormalForm:
    """Quantize a polynomial symbol ``{(m, k): coeff}`` term by term."""
    out = NormalForm()
    for (m, k), c in symbol.items():
        out = out + quantize(m, k, rule).scale(to_exact(c))
    return out


def quantize(m: int, k: int, rule: OrderingRule) -> NormalForm:
    """Normal form of the rule's operator for the symbol q^m p^k."""
    if m < 0 or k < 0:
        raise ValueError("exponents must be non-negative")
    top = min(m, k)
    if not rule.exact and rule.order < top:
        raise ValueError(f"rule {rule.name!r} truncated at order {rule.order} < {top}")
    out = {}
    for big_n in range(top + 1):
        d = Fraction(0)
        for j in range(big_n + 1):
            n = big_n - j
            d = d + rule.coefficient(j) * GaussQ(0, Fraction(-1, 2)) ** n * Fraction(1, factorial(n))
        mult = Fraction(factorial(m) * factorial(k), factorial(m - big_n) * factorial(k - big_n))
        coeff = HPoly.hbar(big_n, d * mult)
        if not coeff.is_zero():
            out[(m - big_n, k - big_n)] = coeff
    return NormalForm(out)


def induced_operator(m: int, k: int) -> NormalForm:
    """(p^k q^m + q^m p^k)/2 + (i hbar k m / 4) [p^(k-1), q^(m-1)] in normal form."""
    half = Fraction(1, 2)
    sym = normal_order(OperatorPoly.word("p" * k + "q" * m, half) + OperatorPoly.word("q" * m + "p" * k, half))
    if m == 0 or k == 0:
        return sym
    a, b = "p" * (k - 1), "q" * (m - 1)
    comm = normal_order(OperatorPoly.word(a + b) - OperatorPoly.word(b + a))
    return sym + comm.scale(HPoly.hbar(1, I * Fraction(k * m, 4)))


def table_operator(name: str, m: int, k: int) -> NormalForm:
    """Normal form of the explicit operator listed for each classical rule."""
    q, p = "q" * m, "p" * k
    if name == "standard":
        ops = {q + p: 1}
    elif name == "anti-standard":
        ops = {p + q: 1}
    elif name == "symmetric":
        ops = {}
        for w in (q + p, p + q):
            ops[w] = ops.get(w, 0) + Fraction(1, 2)
    elif name == "weyl":
        ops = {}
        for l in range(m + 1):
            w = "q" * (m - l) + p + "q" * l
            ops[w] = ops.get(w, 0) + Fraction(comb(m, l), 2 ** m)
    elif name == "born-jordan":
        ops = {}
        for l in range(k + 1):
            w = "p" * (k - l) + q + "p" * l
            ops[w] = ops.get(w, 0) + Fraction(1, k + 1)
    else:
        raise KeyError(name)
    return normal_order(OperatorPoly(ops))


def verify_induced_rule(m_max: int = 4, k_max: int = 4, rule: OrderingRule = INDUCED) -> dict:
    """Compare quantize(m, k, rule) with induced_operator(m, k) on the full grid."""
    table = {}
    for m in range(m_max + 1):
        for k in range(k_max + 1):
            lhs = quantize(m, k, rule)
            rhs = induced_operator(m, k)
            table[(m, k)] = {"equal": lhs == rhs, "quantized": lhs.dump(), "explicit": rhs.dump()}
    return {
        "rule": rule.name,
        "m_max": m_max,
        "k_max": k_max,
        "passed": all(v["equal"] for v in table.values()),
        "table": table,
    }


def classical_limit_check(rule: OrderingRule) -> bool:
    """f -> 1 and df/dhbar -> 0 as hbar -> 0, i.e. c_0 = 1 and c_1 = 0."""
    return rule.coefficient(0) == 1 and rule.coefficient(1) == 0
