r"""Discrete generator as a convolution, plus transform diagnostics.

A grid function is a finite window of samples ``u_j = u(jh)`` with the
convention that it vanishes outside the window. Applying a weight table is
then an exact finite sum

.. math::  (\mathcal{A}_h u)_j = \sum_k w_{j-k} u_k ,

and :func:`apply` refuses to run when the table is too short to cover every
``j - k`` that occurs. The continuous operator is evaluated independently
through its Fourier representation by :func:`reference_apply`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy import integrate

from .errors import AccuracyError, ContractError, DomainError
from .symbols import SchemeKind, StableParams, psi_exact
from .weights import DEFAULT_QUAD_TOL, WeightTable, build_weights

__all__ = [
    "GridFunction",
    "SpectrumOracle",
    "ConvergenceRow",
    "gaussian_spectrum",
    "gaussian_density",
    "sample_on_grid",
    "stencil_reach",
    "tail_half_width",
    "apply",
    "apply_gauge",
    "sdft",
    "reference_apply",
    "convergence_study",
]


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Samples ``u_j`` for ``j = j_lo .. j_lo + len(samples) - 1`` on spacing ``h``."""

    h: float
    j_lo: int
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not self.h > 0:
            raise DomainError("GridFunction: h must be positive")
        u = np.array(self.samples, dtype=float).ravel()
        if u.size == 0:
            raise ContractError("GridFunction: empty sample window")
        if not np.all(np.isfinite(u)):
            raise DomainError("GridFunction: samples must be finite")
        u.setflags(write=False)
        object.__setattr__(self, "samples", u)
        object.__setattr__(self, "j_lo", int(self.j_lo))

    @property
    def j_hi(self) -> int:
        return self.j_lo + self.samples.size - 1

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.j_lo, self.j_hi + 1)

    @property
    def x(self) -> np.ndarray:
        return self.indices * self.h

    def value_at(self, j: int) -> float:
        """``u_j`` with the zero extension outside the window."""
        if self.j_lo <= j <= self.j_hi:
            return float(self.samples[j - self.j_lo])
        return 0.0

    def shifted(self, m: int) -> GridFunction:
        return GridFunction(self.h, self.j_lo + m, self.samples)

    def mirrored(self) -> GridFunction:
        """The grid function ``x -> u(-x)``."""
        return GridFunction(self.h, -self.j_hi, self.samples[::-1])


@dataclass(frozen=True)
class SpectrumOracle:
    """Fourier transform ``u_hat(xi) = ∫ u(x) exp(-i xi x) dx`` of a real function.

    ``decay`` declares an envelope ``|u_hat(xi)| <= constant * env(xi)`` with
    ``env = exp(-rate * xi**2)`` for ``"gaussian"``, ``exp(-rate*|xi|)`` for
    ``"exponential"`` and ``|xi|**(-rate)`` for ``"power"``.
    """

    func: Callable[[np.ndarray], np.ndarray]
    decay: str
    rate: float
    constant: float = 1.0

    def __post_init__(self):
        if self.decay not in ("gaussian", "exponential", "power"):
            raise ContractError(f"unknown decay kind {self.decay!r}")
        if not self.rate > 0:
            raise ContractError("decay rate must be positive")

    def __call__(self, xi):
        return self.func(np.asarray(xi, dtype=float))

    def envelope(self, xi):
        a = np.abs(np.asarray(xi, dtype=float))
        if self.decay == "gaussian":
            return self.constant * np.exp(-self.rate * a * a)
        if self.decay == "exponential":
            return self.constant * np.exp(-self.rate * a)
        with np.errstate(divide="ignore"):
            return self.constant * a ** (-self.rate)


def gaussian_density(x):
    """Standard normal density, the built-in test function."""
    x = np.asarray(x, dtype=float)
    return np.exp(-0.5 * x * x) / math.sqrt(2 * math.pi)


def gaussian_spectrum() -> SpectrumOracle:
    """Transform of :func:`gaussian_density`: ``exp(-xi^2/2)``."""
    return SpectrumOracle(lambda xi: np.exp(-0.5 * xi * xi) + 0j, "gaussian", 0.5)


def sample_on_grid(func: Callable, h: float, a: float, b: float) -> GridFunction:
    """Sample ``func`` at the nodes ``jh`` lying in ``[a, b]``."""
    j_lo = math.ceil(a / h - 1e-9)
    j_hi = math.floor(b / h + 1e-9)
    if j_hi < j_lo:
        raise ContractError("sample_on_grid: window contains no grid node")
    j = np.arange(j_lo, j_hi + 1)
    return GridFunction(h, j_lo, func(j * h))


def _window(u: GridFunction, window) -> tuple[int, int]:
    if window is None:
        return u.j_lo, u.j_hi
    if window == "full":
        raise ContractError("'full' window needs the table half-width; resolve it first")
    lo, hi = int(window[0]), int(window[1])
    if hi < lo:
        raise ContractError("output window must satisfy lo <= hi")
    return lo, hi


def stencil_reach(u: GridFunction, window=None) -> int:
    """Smallest half-width covering every ``j - k`` between the output window and supp(u)."""
    lo, hi = _window(u, window)
    return max(abs(hi - u.j_lo), abs(u.j_hi - lo))


def tail_half_width(alpha: float, tail: float, constant: float = 1.0) -> int:
    """Half-width J with ``2 * sum_{j>J} constant * j^{-1-alpha} <= tail``.

    Uses the integral bound ``sum_{j>J} j^{-1-a} <= J^{-a}/a``. The
    algebraic decay holds for Grünwald-Letnikov weights and for the
    symmetric (beta = 0) spectral tables; skewed spectral tables have an
    additional alternating ``1/j`` component whose sum converges only
    conditionally.
    """
    if not 0 < alpha < 2 or not tail > 0 or not constant > 0:
        raise DomainError("tail_half_width: need 0 < alpha < 2 and positive tail, constant")
    return max(1, math.ceil((2 * constant / (alpha * tail)) ** (1 / alpha)))


def _check_pair(table: WeightTable, u: GridFunction):
    if not math.isclose(table.h, u.h, rel_tol=1e-14, abs_tol=0.0):
        raise ContractError(f"grid mismatch: table h={table.h!r}, function h={u.h!r}")


def _resolve(table: WeightTable, u: GridFunction, window, strict: bool = True):
    _check_pair(table, u)
    if window == "full":
        # widest window on which every interaction with supp(u) is in the table
        lo, hi = u.j_hi - table.half_width, u.j_lo + table.half_width
        if hi < lo:
            raise ContractError(
                f"weight table half-width {table.half_width} is narrower than supp(u) "
                f"({u.j_hi - u.j_lo} steps): no full window exists"
            )
        return lo, hi
    lo, hi = _window(u, window)
    need = max(abs(hi - u.j_lo), abs(u.j_hi - lo))
    if strict and need > table.half_width:
        raise ContractError(
            f"weight table half-width {table.half_width} too small: output window needs {need}"
        )
    return lo, hi


def apply(table: WeightTable, u: GridFunction, window=None, method: str = "direct") -> GridFunction:
    """Evaluate ``sum_k w_{j-k} u_k`` for ``j`` in ``window``.

    ``window`` is ``None`` (u's own window), ``(lo, hi)`` node indices, or
    ``"full"`` for ``[u.j_hi - J, u.j_lo + J]``, the widest window on which
    every interaction lies inside the table. ``method="fft"`` uses a
    transform-based convolution; both methods agree to rounding.
    """
    lo, hi = _resolve(table, u, window)
    J = table.half_width
    if method == "direct":
        full = np.convolve(u.samples, table.values)
    elif method == "fft":
        from scipy.signal import fftconvolve

        full = fftconvolve(u.samples, table.values)
    else:
        raise ContractError(f"unknown method {method!r}")
    # full[n] is the output at node u.j_lo - J + n
    base = u.j_lo - J
    out = np.zeros(hi - lo + 1)
    a, b = max(lo, base), min(hi, base + full.size - 1)
    if a <= b:
        out[a - lo : b - lo + 1] = full[a - base : b - base + 1]
    return GridFunction(u.h, lo, out)


def apply_gauge(table: WeightTable, u: GridFunction, window=None) -> GridFunction:
    """Gauge form ``sum_{|j-k|<=J} w_{j-k} (u_k - u_j)``.

    Differs from :func:`apply` by ``u_j * sum_{|m|<=J} w_m``; the two agree
    only in the limit ``J -> infinity``. Evaluated directly so that a
    function constant over the stencil gives exactly zero.

    The sum is truncated at ``|j - k| <= J`` by definition, so any output
    window is accepted; ``u`` is extended by zero outside its support.
    """
    lo, hi = _resolve(table, u, window, strict=False)
    J = table.half_width
    # padded[p] = u at node lo - J + p
    n_out = hi - lo + 1
    padded = np.zeros(n_out + 2 * J)
    a, b = max(u.j_lo, lo - J), min(u.j_hi, hi + J)
    if a <= b:
        padded[a - (lo - J) : b - (lo - J) + 1] = u.samples[a - u.j_lo : b - u.j_lo + 1]
    centre = padded[J : J + n_out]
    win = sliding_window_view(padded, 2 * J + 1)  # win[i, p] = u at node lo + i - J + p
    diffs = win - centre[:, None]
    out = diffs @ table.values[::-1]
    return GridFunction(u.h, lo, out)


def sdft(u: GridFunction, xi) -> np.ndarray | complex:
    """Semi-discrete transform ``h * sum_j exp(-i xi x_j) u_j``."""
    x = np.asarray(xi, dtype=float)
    if np.any(np.abs(x) > math.pi / u.h * (1 + 1e-14)):
        raise DomainError("sdft: |xi| must not exceed pi/h")
    flat = np.atleast_1d(x)
    phase = np.exp(-1j * np.outer(flat, u.x))
    val = u.h * (phase @ u.samples)
    return complex(val[0]) if x.ndim == 0 else val.reshape(x.shape)


def _truncation(params: StableParams, spectrum: SpectrumOracle, tol: float) -> float:
    """Cut-off Ξ with (1/π)∫_Ξ^∞ |ψ| env ≤ tol/2, doubled once for safety."""

    def tail(c):
        f = lambda s: abs(complex(psi_exact(s, params))) * float(spectrum.envelope(s))
        val, _ = integrate.quad(f, c, np.inf, limit=200)
        return val / math.pi

    if spectrum.decay == "power" and spectrum.rate <= params.alpha + 1 + (params.alpha == 1.0):
        raise ContractError("spectrum decays too slowly for an absolutely convergent integral")
    c = 1.0
    for _ in range(200):
        if tail(c) <= tol / 2:
            return 2 * c
        c *= 1.25
    raise AccuracyError("reference_apply: could not bound the spectral tail")


def reference_apply(
    params: StableParams,
    spectrum: SpectrumOracle,
    x_points: Iterable[float],
    tol: float = 1e-12,
) -> np.ndarray:
    r"""Continuous operator ``(1/2π) ∫ ψ(-ξ) û(ξ) e^{ixξ} dξ`` at each point.

    For real ``u`` the integrand is Hermitian, so the value is
    ``(1/π) ∫_0^Ξ Re[ψ(-ξ) û(ξ) e^{ixξ}] dξ`` plus a tail below ``tol/2``.
    """
    x_arr = np.atleast_1d(np.asarray(list(x_points) if not isinstance(x_points, np.ndarray) else x_points, float))
    cut = _truncation(params, spectrum, tol)
    out = np.empty(x_arr.size)
    budget = tol / 2 * math.pi
    # Break points at the symbol's kink and every few oscillation periods
    for i, x in enumerate(x_arr):

        def integrand(s, x=x):
            return (psi_exact(-s, params) * complex(spectrum(s)) * complex(math.cos(x * s), math.sin(x * s))).real

        n_pieces = max(4, int(abs(x) * cut / math.pi) + 1)
        edges = np.linspace(0.0, cut, n_pieces + 1)
        total, err_total = [], 0.0
        for a, b in zip(edges[:-1], edges[1:]):
            val, err = integrate.quad(integrand, a, b, epsabs=budget / n_pieces, epsrel=0.0, limit=200)
            total.append(val)
            err_total += err
        if err_total > budget:
            raise AccuracyError(
                f"reference_apply: estimated error {err_total / math.pi:.3g} exceeds {tol / 2:.3g} at x={x}",
                partial=math.fsum(total) / math.pi,
                estimate=err_total / math.pi,
            )
        out[i] = math.fsum(total) / math.pi
    return out


@dataclass(frozen=True)
class ConvergenceRow:
    scheme: SchemeKind
    h: float
    sup_error: float
    slope: float


def _fit_slope(hs: Sequence[float], errs: Sequence[float]) -> float:
    lh, le = np.log(np.asarray(hs)), np.log(np.asarray(errs))
    slope, _ = np.polyfit(lh, le, 1)
    return float(slope)


def convergence_study(
    schemes,
    params: StableParams,
    spectrum: SpectrumOracle,
    sampler: Callable,
    h_list: Sequence[float],
    window: tuple[float, float] = (-4.0, 4.0),
    sample_window: tuple[float, float] = (-8.0, 8.0),
    quad_tol: float = DEFAULT_QUAD_TOL,
    ref_tol: float = 1e-11,
) -> list[ConvergenceRow]:
    """Sup error of each scheme against :func:`reference_apply` on ``window``.

    ``h_list`` must be strictly decreasing with at least three entries. The
    slope is a least-squares fit of log error against log h, repeated on
    every row of a scheme.
    """
    hs = [float(h) for h in h_list]
    if len(hs) < 3 or any(b >= a for a, b in zip(hs, hs[1:])):
        raise ContractError("convergence_study: h_list must be strictly decreasing with >= 3 values")
    kinds = [SchemeKind.parse(s) for s in schemes]
    reference: dict[float, float] = {}
    rows: list[ConvergenceRow] = []
    for kind in kinds:
        errs = []
        for h in hs:
            u = sample_on_grid(sampler, h, *sample_window)
            lo = math.ceil(window[0] / h - 1e-9)
            hi = math.floor(window[1] / h + 1e-9)
            table = build_weights(kind, params, h, stencil_reach(u, (lo, hi)), quad_tol)
            au = apply(table, u, (lo, hi))
            missing = [x for x in au.x if float(x) not in reference]
            if missing:
                for x, v in zip(missing, reference_apply(params, spectrum, np.array(missing), ref_tol)):
                    reference[float(x)] = float(v)
            exact = np.array([reference[float(x)] for x in au.x])
            errs.append(float(np.max(np.abs(au.samples - exact))))
        slope = _fit_slope(hs, errs)
        rows.extend(ConvergenceRow(kind, h, e, slope) for h, e in zip(hs, errs))
    return rows
