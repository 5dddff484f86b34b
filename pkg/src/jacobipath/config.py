"""Flat ``key = value`` run configuration.

Blank lines and lines starting with ``#`` are ignored.  Recognised keys:

=================  ===========================================================
experiment         hj-series | resummation | mode-residual | short-time |
                   compose | relativistic | ordering
name               stem for output files (default: the experiment name)
potential          ``deg:coeff`` pairs, comma separated, e.g. ``3:1,1:-1/2``
m, hbar, omega, c  positive rationals (``7/3`` or ``0.5``)
order              truncation order L of the tau-series
q_min, q_max       grid bounds
n_points           grid size
system             compose reference: harmonic | free
total_time         total time T of a composed run
slices             comma separated list of slice counts N
wick               real | euclidean | an angle in radians
scheme             auto | contour | band
n_nodes            quadrature nodes
p_max              band half-width
tol                pass threshold on the headline error (per-experiment default)
quad_tol           tolerance of the quadrature self-check
eps_ladder         comma separated |eps| values (short-time)
q2, q1             evaluation points (short-time)
min_slope          required log-log slope (per-experiment default)
dq, beta           comma separated lists of equal length (relativistic)
m_max, k_max       ordering grid
hbar_ladder        comma separated hbar values (mode-residual)
workers            threads for matrix assembly
output_dir         output directory; JACOBIPATH_OUTPUT_DIR overrides it
=================  ===========================================================
"""

from __future__ import annotations

import math
import os
from dataclasses import asdict, dataclass, fields
from fractions import Fraction

EXPERIMENTS = ("hj-series", "resummation", "mode-residual", "short-time", "compose", "relativistic", "ordering")
OUTPUT_ENV = "JACOBIPATH_OUTPUT_DIR"


class ConfigError(ValueError):
    """Invalid or incomplete configuration."""


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"not a rational number: {text!r}") from exc


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(Fraction(t.strip())) for t in text.split(",") if t.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"not a list of numbers: {text!r}") from exc


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise ConfigError(f"not a list of integers: {text!r}") from exc


def parse_potential(text: str) -> tuple[tuple[int, Fraction], ...]:
    """``"3:1,2:2,1:1"`` -> ((3, 1), (2, 2), (1, 1)); the empty string is V = 0."""
    out = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if ":" not in item:
            raise ConfigError(f"potential term {item!r} is not deg:coeff")
        deg, coeff = item.split(":", 1)
        try:
            d = int(deg)
        except ValueError as exc:
            raise ConfigError(f"bad degree in {item!r}") from exc
        if d < 0:
            raise ConfigError("potential degrees must be non-negative")
        out.append((d, _rational(coeff)))
    return tuple(out)


def _wick(text: str) -> float:
    t = text.strip().lower()
    if t == "real":
        return 0.0
    if t == "euclidean":
        return math.pi / 2
    try:
        return float(t)
    except ValueError as exc:
        raise ConfigError(f"bad wick angle {text!r}") from exc


@dataclass(frozen=True)
class RunConfig:
    experiment: str
    name: str = ""
    potential: tuple = ((3, Fraction(1)),)
    m: Fraction = Fraction(1)
    hbar: Fraction = Fraction(1)
    omega: Fraction = Fraction(1)
    c: Fraction = Fraction(1)
    order: int = 8
    q_min: float = -4.0
    q_max: float = 4.0
    n_points: int = 128
    system: str = "harmonic"
    total_time: float = 0.5
    slices: tuple = (16, 32, 64, 128, 256)
    wick: float = math.pi / 2
    scheme: str = "auto"
    n_nodes: int = 40
    p_max: float | None = None
    tol: float | None = None
    quad_tol: float = 1e-8
    eps_ladder: tuple = (0.2, 0.1, 0.05, 0.025, 0.0125)
    q2: float = 0.5
    q1: float = 0.3
    min_slope: float | None = None
    dq: tuple = ()
    beta: tuple = ()
    m_max: int = 4
    k_max: int = 4
    hbar_ladder: tuple = (Fraction(1), Fraction(2), Fraction(3), Fraction(4))
    workers: int = 1
    output_dir: str = "runs"

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; choose from {', '.join(EXPERIMENTS)}")
        for key in ("m", "hbar", "omega", "c"):
            if getattr(self, key) <= 0:
                raise ConfigError(f"{key} must be positive")
        if self.order < 1:
            raise ConfigError("order must be at least 1")
        if not self.q_max > self.q_min or self.n_points < 2:
            raise ConfigError("grid needs q_max > q_min and n_points >= 2")
        if self.system not in ("harmonic", "free"):
            raise ConfigError("system must be harmonic or free")
        if self.total_time <= 0 or not self.slices or min(self.slices) < 1:
            raise ConfigError("total_time must be positive and slices must be positive integers")
        if not 0 <= self.wick <= math.pi / 2 + 1e-12:
            raise ConfigError("wick angle must lie in [0, pi/2]")
        if self.scheme not in ("auto", "contour", "band"):
            raise ConfigError("scheme must be auto, contour or band")
        if self.experiment == "relativistic":
            if not self.dq or len(self.dq) != len(self.beta):
                raise ConfigError("relativistic runs need dq and beta lists of equal length")
            if min(self.beta) <= 0:
                raise ConfigError("beta values must be positive")
        if self.experiment == "short-time" and len(self.eps_ladder) < 2:
            raise ConfigError("eps_ladder needs at least two values")
        if self.experiment == "mode-residual" and (not self.hbar_ladder or min(self.hbar_ladder) <= 0):
            raise ConfigError("hbar_ladder values must be positive")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")

    @property
    def stem(self) -> str:
        return self.name or self.experiment

    def resolved_output_dir(self) -> str:
        return os.environ.get(OUTPUT_ENV) or self.output_dir

    def echo(self) -> dict:
        """JSON-ready copy of every parameter; rationals as strings."""
        out = {}
        for k, v in asdict(self).items():
            if isinstance(v, Fraction):
                v = str(v)
            elif k == "potential":
                v = [[d, str(c)] for d, c in v]
            elif isinstance(v, tuple):
                v = [str(x) if isinstance(x, Fraction) else x for x in v]
            out[k] = v
        out["output_dir"] = self.resolved_output_dir()
        return out


_PARSERS = {
    "experiment": str.strip,
    "name": str.strip,
    "potential": parse_potential,
    "m": _rational,
    "hbar": _rational,
    "omega": _rational,
    "c": _rational,
    "order": int,
    "q_min": float,
    "q_max": float,
    "n_points": int,
    "system": str.strip,
    "total_time": float,
    "slices": _ints,
    "wick": _wick,
    "scheme": str.strip,
    "n_nodes": int,
    "p_max": float,
    "tol": float,
    "quad_tol": float,
    "eps_ladder": _floats,
    "q2": float,
    "q1": float,
    "min_slope": float,
    "dq": _floats,
    "beta": _floats,
    "m_max": int,
    "k_max": int,
    "hbar_ladder": lambda t: tuple(_rational(x) for x in t.split(",") if x.strip()),
    "workers": int,
    "output_dir": str.strip,
}
assert set(_PARSERS) == {f.name for f in fields(RunConfig)}


def parse_config(text: str) -> RunConfig:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _PARSERS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            values[key] = _PARSERS[key](value)
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {value!r}") from exc
    if "experiment" not in values:
        raise ConfigError("missing required key 'experiment'")
    return RunConfig(**values)


def load_config(path: str) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_config(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
