"""Fourier integrals over [0, pi] with oscillation-aware panels.

Panels have length pi/|j| so each carries at most one half-period of the
trigonometric factor; the panel touching 0 is geometrically graded because
the multipliers behave like xi^alpha (or xi log xi) there. Each panel is
integrated with a pair of Gauss-Legendre rules whose difference serves as
the local error estimate; panels that miss their share of the tolerance
are bisected.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import AccuracyError

_LOW, _HIGH = 12, 20
_GRADING = 0.15
_GRADING_LEVELS = 40
_MAX_ROUNDS = 30


@lru_cache(maxsize=None)
def _rule(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _integrate_panels(g, a, b, n):
    x, w = _rule(n)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    pts = mid[:, None] + half[:, None] * x[None, :]
    return half * (g(pts) @ w)


def _initial_panels(j: int):
    n = max(1, abs(j))
    edges = np.linspace(0.0, math.pi, n + 1)
    first = edges[1]
    graded = first * _GRADING ** np.arange(_GRADING_LEVELS, -1, -1)
    left = np.concatenate(([0.0], graded[:-1]))
    a = np.concatenate((left, edges[1:-1]))
    b = np.concatenate((graded, edges[2:]))
    return a, b


def fourier_integral(f, j: int, kind: str, tol: float = 1e-12) -> tuple[float, float]:
    """Return ``(value, error_estimate)`` for ∫_0^π f(ξ) trig(jξ) dξ.

    ``f`` must be vectorised; ``kind`` is ``"cos"`` or ``"sin"``.
    Raises :class:`AccuracyError` if ``tol`` cannot be met.
    """
    if kind not in ("cos", "sin"):
        raise ValueError("kind must be 'cos' or 'sin'")
    if kind == "sin" and j == 0:
        return 0.0, 0.0
    trig = np.cos if kind == "cos" else np.sin

    def g(x):
        return f(x) * trig(j * x)

    a, b = _initial_panels(j)
    accepted: list[np.ndarray] = []
    err_total = 0.0
    for _ in range(_MAX_ROUNDS):
        lo = _integrate_panels(g, a, b, _LOW)
        hi = _integrate_panels(g, a, b, _HIGH)
        err = np.abs(hi - lo)
        budget = 0.5 * tol * (b - a) / math.pi
        ok = (err <= budget) | (b - a < 1e-300)
        accepted.append(hi[ok])
        err_total += float(np.sum(err[ok]))
        if ok.all():
            value = math.fsum(np.concatenate(accepted))
            return value, err_total
        a, b = a[~ok], b[~ok]
        m = 0.5 * (a + b)
        a, b = np.concatenate((a, m)), np.concatenate((m, b))
    partial = math.fsum(np.concatenate(accepted))
    raise AccuracyError(f"fourier_integral: tolerance {tol:g} not met for j={j}", partial=partial, estimate=err_total)
