"""Infinitesimal propagators from the Jacobi principal function, grids and composition.

One slice of duration eps between q' and q'' is

    K = int dp/(2 pi hbar) |M(q'', p, eps/2)|^(1/2) |M(q', p, -eps/2)|^(1/2)
            exp{(i/hbar)[J(q'', p, eps/2) - J(q', p, -eps/2)]},     M = d2J/dqdp.

The second factor is |-d2J(p t|q' t')/dq'dp|^(1/2) rewritten with
J(p t|q' t') = -J(q', p, t' - t); it equals 1 at eps = 0.

Two quadrature schemes are available:

``contour``
    The phase is a polynomial in p.  Its quadratic part is integrated exactly
    by moving onto the steepest-descent line through the saddle point; the rest
    (higher powers of p and the prefactor) is handled by Gauss-Hermite nodes
    on that line.  Off the real axis the modulus in the prefactor is replaced by
    its analytic continuation, the principal square root of M.
``band``
    Midpoint rule on a finite real interval [-p_max, p_max].  With p_max at the
    grid's Nyquist momentum pi hbar / dq and one node per grid point the
    free-particle slice matrix is exactly unitary; this is the scheme used for
    real time.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from numpy.polynomial.hermite import hermgauss

from .jacobi import JacobiSeries
from .kernels import short_time_reference

__all__ = [
    "QuadratureError",
    "GridMismatchError",
    "Grid1D",
    "QuadParams",
    "TimeSlicing",
    "WaveState",
    "PropagatorMatrix",
    "NumericJacobi",
    "infinitesimal_qq",
    "infinitesimal_pp",
    "build_slice_matrix",
    "compose",
    "propagate",
    "inner_product",
    "verify_short_time_reduction",
    "loglog_slope",
]


class QuadratureError(RuntimeError):
    """The momentum quadrature did not reach the requested tolerance."""


class GridMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class Grid1D:
    q_min: float
    q_max: float
    n_points: int

    def __post_init__(self):
        if not self.q_max > self.q_min:
            raise ValueError("q_max must exceed q_min")
        if self.n_points < 2:
            raise ValueError("need at least two grid points")

    @property
    def dq(self) -> float:
        return (self.q_max - self.q_min) / (self.n_points - 1)

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.q_min, self.q_max, self.n_points)

    @property
    def nyquist(self) -> float:
        """Largest momentum resolved by the grid, in units where hbar = 1."""
        return math.pi / self.dq


@dataclass(frozen=True)
class QuadParams:
    """Momentum quadrature settings.

    ``scheme`` is ``"contour"``, ``"band"`` or ``"auto"`` (contour whenever the
    phase has a nonzero quadratic part, band otherwise).  ``p_max`` is the
    half-width of the band interval in the integration variable (q for the
    momentum-representation kernel); for grid matrices it defaults to the
    Nyquist momentum.  ``trust_radius`` bounds |eps| for the truncated series.
    """

    scheme: str = "auto"
    n_nodes: int = 40
    p_max: float | None = None
    tol: float = 1e-9
    check: bool = False
    trust_radius: float | None = None

    def __post_init__(self):
        if self.scheme not in ("auto", "contour", "band"):
            raise ValueError(f"unknown quadrature scheme {self.scheme!r}")
        if self.n_nodes < 2:
            raise ValueError("need at least two quadrature nodes")


@dataclass(frozen=True)
class TimeSlicing:
    """Total time split into equal slices, rotated as t -> t exp(-i delta)."""

    total_time: float
    n_slices: int
    wick_angle: float = 0.0

    def __post_init__(self):
        if self.n_slices < 1:
            raise ValueError("need at least one slice")
        if not 0.0 <= self.wick_angle <= math.pi / 2 + 1e-15:
            raise ValueError("wick angle must lie in [0, pi/2]")

    @property
    def rotation(self) -> complex:
        if abs(self.wick_angle - math.pi / 2) < 1e-15:
            return -1j
        return complex(math.cos(self.wick_angle), -math.sin(self.wick_angle))

    @property
    def total(self) -> complex:
        return self.total_time * self.rotation

    @property
    def slice_time(self) -> complex:
        return self.total / self.n_slices


def wick_angle_of(eps: complex) -> float:
    eps = complex(eps)
    if eps == 0:
        return 0.0
    # backward real time counts as unrotated
    return -math.atan2(eps.imag, abs(eps.real))


@dataclass
class WaveState:
    grid: Grid1D
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (self.grid.n_points,):
            raise GridMismatchError("amplitude vector does not match the grid")
        if not np.all(np.isfinite(self.amplitudes)):
            raise ValueError("wave state has non-finite entries")

    @classmethod
    def from_function(cls, grid: Grid1D, fn) -> "WaveState":
        return cls(grid, fn(grid.points))

    def norm2(self) -> float:
        return float(inner_product(self, self).real)


@dataclass
class PropagatorMatrix:
    """Kernel samples K(q_i, q_j); ``operator`` folds in the dq weight of the composition sum."""

    grid: Grid1D
    kernel: np.ndarray
    slice_time: complex
    wick_angle: float = 0.0
    n_slices: int = 1
    meta: dict = field(default_factory=dict)

    @property
    def operator(self) -> np.ndarray:
        return self.kernel * self.grid.dq

    def __matmul__(self, other: "PropagatorMatrix") -> "PropagatorMatrix":
        return compose(self, other)

    def power(self, n: int) -> "PropagatorMatrix":
        """n-fold composition by repeated squaring (fixed, deterministic schedule)."""
        if n < 1:
            raise ValueError("power must be positive")
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else compose(result, base)
            n >>= 1
            if n:
                base = compose(base, base)
        return result


def compose(later: PropagatorMatrix, earlier: PropagatorMatrix) -> PropagatorMatrix:
    """K(q'', q') = sum_j dq K_later(q'', q_j) K_earlier(q_j, q')."""
    if later.grid != earlier.grid:
        raise GridMismatchError("cannot compose kernels on different grids")
    k = later.kernel @ earlier.kernel * later.grid.dq
    return PropagatorMatrix(
        later.grid,
        k,
        later.slice_time * later.n_slices + earlier.slice_time * earlier.n_slices,
        later.wick_angle,
        1,
        {"composed": True},
    )


def propagate(state: WaveState, K: PropagatorMatrix) -> WaveState:
    if state.grid != K.grid:
        raise GridMismatchError("state and kernel live on different grids")
    return WaveState(state.grid, K.operator @ state.amplitudes)


def inner_product(a: WaveState, b: WaveState) -> complex:
    if a.grid != b.grid:
        raise GridMismatchError("states live on different grids")
    return complex(np.sum(np.conj(a.amplitudes) * b.amplitudes) * a.grid.dq)


# ----------------------------------------------------------------------------
# numeric form of the Jacobi series


class NumericJacobi:
    """Float coefficient arrays of J and d2J/dqdp for vectorized evaluation."""

    def __init__(self, js: JacobiSeries):
        self.js = js
        self.hbar = float(js.potential.hbar)
        self.m = float(js.potential.m)
        self.J = js.j.to_array()
        self.M = js.mixed_derivative().to_array()

    @staticmethod
    def _contract(C: np.ndarray, x: np.ndarray, tau: complex, axis: str) -> np.ndarray:
        """Coefficients in the remaining variable: sum_{l,a} C[l,a,b] x^a tau^l (axis='q').

        For axis='p' the roles of q and p swap.
        """
        x = np.atleast_1d(np.asarray(x, dtype=complex))
        tpow = tau ** np.arange(C.shape[0])
        if axis == "q":
            xpow = x[:, None] ** np.arange(C.shape[1])[None, :]
            return np.einsum("l,na,lab->nb", tpow, xpow, C)
        xpow = x[:, None] ** np.arange(C.shape[2])[None, :]
        return np.einsum("l,nb,lab->na", tpow, xpow, C)

    def phase_in_p(self, q2, q1, eps):
        """p-polynomials of J(q2,p,eps/2) and J(q1,p,-eps/2) and their mixed derivatives."""
        h = complex(eps) / 2
        return (
            self._contract(self.J, q2, h, "q"),
            self._contract(self.J, q1, -h, "q"),
            self._contract(self.M, q2, h, "q"),
            self._contract(self.M, q1, -h, "q"),
        )


def _horner(coeffs: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Evaluate polynomials with coefficients along the last axis of ``coeffs`` at ``x``.

    ``coeffs`` has shape (..., d+1) and broadcasts against ``x`` of shape (..., K).
    """
    out = np.zeros(np.broadcast_shapes(coeffs.shape[:-1] + (1,), x.shape), dtype=complex)
    for b in range(coeffs.shape[-1] - 1, -1, -1):
        out = out * x + coeffs[..., b : b + 1]
    return out


def _pad(a: np.ndarray, n: int) -> np.ndarray:
    if a.shape[-1] >= n:
        return a
    pad = [(0, 0)] * (a.ndim - 1) + [(0, n - a.shape[-1])]
    return np.pad(a, pad)


def _amplitude(m2: np.ndarray, m1: np.ndarray, real_line: bool) -> np.ndarray:
    if real_line:
        return np.sqrt(np.abs(m2)) * np.sqrt(np.abs(m1))
    return np.sqrt(m2) * np.sqrt(m1)


def _oscillatory(phi, m2c, m1c, hbar, quad: QuadParams, x_max=None, real_axis_amplitude=False):
    """int dx/(2 pi hbar) sqrt(M2(x)) sqrt(M1(x)) exp(i phi(x)/hbar) for polynomial phi, M.

    All coefficient arrays have shape (N, d+1); returns (values, scheme used).
    """
    deg = max(phi.shape[-1], 3)
    phi = _pad(phi, deg)
    a = phi[:, 2]
    scheme = quad.scheme
    if scheme == "auto":
        scheme = "contour" if np.all(np.abs(a) > 1e-300) else "band"
    if scheme == "contour":
        if np.any(a == 0):
            raise QuadratureError("contour scheme needs a nonzero quadratic term in the phase")
        return _contour(phi, m2c, m1c, hbar, quad.n_nodes), "contour"
    if x_max is None:
        x_max = quad.p_max
    if x_max is None:
        raise QuadratureError("band scheme needs an integration half-width")
    return _band(phi, m2c, m1c, hbar, quad.n_nodes, x_max, real_axis_amplitude), "band"


def _contour(phi, m2c, m1c, hbar, n_nodes):
    a, b, c = phi[:, 2], phi[:, 1], phi[:, 0]
    x0 = -b / (2 * a)
    kappa = np.sqrt(1j * hbar / a)
    s, w = hermgauss(n_nodes)
    x = x0[:, None] + kappa[:, None] * s[None, :]
    rest = phi.copy()
    rest[:, :3] = 0
    extra = _horner(rest, x) if rest.shape[-1] > 3 else 0.0
    amp = _amplitude(_horner(m2c, x), _horner(m1c, x), False)
    base = c - b * b / (4 * a)
    expo = 1j * (base[:, None] + extra) / hbar
    vals = np.sum(w[None, :] * amp * np.exp(expo), axis=1)
    return kappa / (2 * math.pi * hbar) * vals


def _band(phi, m2c, m1c, hbar, n_nodes, x_max, real_amp):
    h = 2 * x_max / n_nodes
    x = -x_max + h * (np.arange(n_nodes) + 0.5)
    xx = np.broadcast_to(x, (phi.shape[0], n_nodes))
    amp = _amplitude(_horner(m2c, xx), _horner(m1c, xx), real_amp)
    vals = np.sum(amp * np.exp(1j * _horner(phi, xx) / hbar), axis=1)
    return h * vals / (2 * math.pi * hbar)


def _check_trust(eps, quad: QuadParams):
    if quad.trust_radius is not None and abs(complex(eps)) > quad.trust_radius:
        raise ValueError(f"|eps| = {abs(complex(eps)):.3g} exceeds the series trust radius {quad.trust_radius:.3g}")


def _pair_kernel(nj: NumericJacobi, q2, q1, eps, quad: QuadParams):
    """Engine kernel for matched arrays q2, q1 (same length)."""
    _check_trust(eps, quad)
    j2, j1, m2, m1 = nj.phase_in_p(q2, q1, eps)
    phi = j2 - j1
    real = complex(eps).imag == 0
    vals, used = _oscillatory(phi, m2, m1, nj.hbar, quad, real_axis_amplitude=real)
    if quad.check:
        coarse = replace(quad, n_nodes=max(2, (3 * quad.n_nodes) // 4), check=False)
        scheme = quad.scheme if quad.scheme != "auto" else used
        alt, _ = _oscillatory(phi, m2, m1, nj.hbar, replace(coarse, scheme=scheme), real_axis_amplitude=real)
        scale = np.maximum(np.abs(vals), 1e-300)
        est = np.max(np.abs(vals - alt) / scale)
        if est > quad.tol:
            raise QuadratureError(
                f"{used} quadrature with {quad.n_nodes} nodes: estimated relative error {est:.3e} > tol {quad.tol:.1e}"
            )
    return vals


def infinitesimal_qq(js: JacobiSeries | NumericJacobi, q2, q1, eps, quad: QuadParams | None = None) -> complex:
    """One-slice kernel K(q'', t + eps | q', t) from the momentum integral."""
    nj = js if isinstance(js, NumericJacobi) else NumericJacobi(js)
    quad = quad or QuadParams(check=True)
    out = _pair_kernel(nj, np.atleast_1d(q2), np.atleast_1d(q1), eps, quad)
    return complex(out[0]) if np.ndim(q2) == 0 and np.ndim(q1) == 0 else out


def infinitesimal_pp(js: JacobiSeries | NumericJacobi, p2, p1, eps, quad: QuadParams | None = None):
    """Momentum-representation slice kernel; the integral runs over q.

    Phase  J(q, p', eps/2) - J(q, p'', -eps/2), prefactor
    sqrt(M(q, p'', -eps/2)) sqrt(M(q, p', eps/2)).
    """
    nj = js if isinstance(js, NumericJacobi) else NumericJacobi(js)
    quad = quad or QuadParams()
    _check_trust(eps, quad)
    h = complex(eps) / 2
    p2a, p1a = np.atleast_1d(p2), np.atleast_1d(p1)
    ja = nj._contract(nj.J, p1a, h, "p")
    jb = nj._contract(nj.J, p2a, -h, "p")
    ma = nj._contract(nj.M, p1a, h, "p")
    mb = nj._contract(nj.M, p2a, -h, "p")
    real = complex(eps).imag == 0
    vals, _ = _oscillatory(ja - jb, mb, ma, nj.hbar, quad, real_axis_amplitude=real)
    return complex(vals[0]) if np.ndim(p2) == 0 and np.ndim(p1) == 0 else vals


def build_slice_matrix(
    js: JacobiSeries,
    grid: Grid1D,
    eps,
    quad: QuadParams | None = None,
    mode: str = "engine",
    workers: int = 1,
) -> PropagatorMatrix:
    """Dense one-slice kernel on the grid.

    ``mode`` is ``"engine"`` (momentum integral) or ``"short_time_reference"``.
    At eps = 0 the matrix is identity/dq.  Rows are assembled in independent
    chunks; with ``workers > 1`` chunks run on a thread pool, each writing its
    own rows, so the result does not depend on the schedule.
    """
    eps = complex(eps)
    q = grid.points
    n = grid.n_points
    delta = wick_angle_of(eps)
    if eps == 0:
        return PropagatorMatrix(grid, np.eye(n, dtype=complex) / grid.dq, 0j, 0.0)
    quad = quad or QuadParams()
    if mode == "short_time_reference":
        kern = short_time_reference(q[:, None], q[None, :], eps, js.potential)
        return PropagatorMatrix(grid, np.asarray(kern, dtype=complex), eps, delta, meta={"mode": mode})
    if mode != "engine":
        raise ValueError(f"unknown mode {mode!r}")
    if quad.scheme == "auto":
        quad = replace(quad, scheme="band" if eps.imag == 0 else "contour")
    if quad.scheme == "band":
        p_max = quad.p_max if quad.p_max is not None else math.pi * float(js.potential.hbar) / grid.dq
        nodes = quad.n_nodes if quad.p_max is not None else max(quad.n_nodes, n)
        quad = replace(quad, p_max=p_max, n_nodes=nodes)
    nj = NumericJacobi(js)
    kern = np.empty((n, n), dtype=complex)
    rows_per_chunk = max(1, int(2_000_000 // (n * quad.n_nodes)))
    chunks = [(s, min(n, s + rows_per_chunk)) for s in range(0, n, rows_per_chunk)]

    def fill(bounds):
        s, e = bounds
        ii, jj = np.meshgrid(np.arange(s, e), np.arange(n), indexing="ij")
        vals = _pair_kernel(nj, q[ii.ravel()], q[jj.ravel()], eps, quad)
        kern[s:e] = vals.reshape(e - s, n)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(fill, chunks))
    else:
        for c in chunks:
            fill(c)
    meta = {"mode": mode, "scheme": quad.scheme, "n_nodes": quad.n_nodes, "p_max": quad.p_max}
    return PropagatorMatrix(grid, kern, eps, delta, meta=meta)


def loglog_slope(x, y) -> float:
    """Least-squares slope of log y against log x; exact zeros are clipped to the smallest float."""
    tiny = np.finfo(float).tiny
    lx = np.log(np.asarray(x, dtype=float))
    ly = np.log(np.maximum(np.asarray(y, dtype=float), tiny))
    return float(np.polyfit(lx, ly, 1)[0])


def verify_short_time_reduction(js: JacobiSeries, eps_ladder, q2: float, q1: float, quad: QuadParams | None = None):
    """Relative discrepancy between the engine slice and the short-time closed form.

    Returns ``(rows, slope)``; each row is a dict with eps, both kernel values
    and the absolute and relative discrepancy.  ``slope`` is the log-log slope of
    the relative discrepancy against |eps|.
    """
    quad = quad or QuadParams(scheme="contour", check=True)
    rows = []
    for eps in eps_ladder:
        eng = infinitesimal_qq(js, q2, q1, eps, quad)
        ref = complex(short_time_reference(q2, q1, eps, js.potential))
        rows.append(
            {
                "eps": complex(eps),
                "engine": eng,
                "reference": ref,
                "abs_err": abs(eng - ref),
                "rel_err": abs(eng - ref) / abs(ref),
            }
        )
    slope = loglog_slope([abs(r["eps"]) for r in rows], [r["rel_err"] for r in rows])
    return rows, slope
