r"""Real special functions used by the weight formulas.

Everything here is scalar, double precision and free of shared state.
Series are summed with Neumaier's compensated summation and stopped once
two consecutive terms fall below ``EPS`` relative to the running sum.
"""

from __future__ import annotations

import cmath
import math

from .errors import AccuracyError, DomainError

EPS = 1e-16
MAX_TERMS = 1_000_000


class _Neumaier:
    """Compensated running sum."""

    __slots__ = ("total", "comp")

    def __init__(self, start: float = 0.0):
        self.total = start
        self.comp = 0.0

    def add(self, x: float) -> None:
        t = self.total + x
        if abs(self.total) >= abs(x):
            self.comp += (self.total - t) + x
        else:
            self.comp += (x - t) + self.total
        self.total = t

    @property
    def value(self) -> float:
        return self.total + self.comp


def _is_pole(x: float) -> bool:
    return x <= 0 and x == math.floor(x)


def log_gamma(x: float) -> tuple[float, int]:
    """Return ``(log|Γ(x)|, sign Γ(x))``.

    Raises :class:`DomainError` at the poles ``0, -1, -2, ...``.
    """
    if not math.isfinite(x):
        raise DomainError(f"log_gamma: non-finite argument {x!r}")
    if _is_pole(x):
        raise DomainError(f"log_gamma: pole at {x!r}")
    if x > 0:
        sign = 1
    else:
        # Γ alternates sign between consecutive negative poles.
        sign = -1 if math.ceil(-x) % 2 else 1
    return math.lgamma(x), sign


def gamma_ratio(a: float, b: float) -> float:
    """Γ(a)/Γ(b) evaluated in log space.

    A pole in the denominator gives 0, a pole in the numerator is an error.
    """
    if _is_pole(a):
        raise DomainError(f"gamma_ratio: numerator pole at a={a!r}")
    if _is_pole(b):
        return 0.0
    la, sa = log_gamma(a)
    lb, sb = log_gamma(b)
    return sa * sb * math.exp(la - lb)


def pochhammer(a: float, n: int) -> float:
    """Rising factorial a(a+1)...(a+n-1); 1 for ``n == 0``."""
    if n < 0:
        raise DomainError("pochhammer: n must be non-negative")
    p = 1.0
    for k in range(n):
        p *= a + k
    return p


def gen_binomial(alpha: float, k: int) -> float:
    """Signed binomial coefficient (-1)^k C(alpha, k) = Γ(k-α)/(k! Γ(-α)).

    Uses the product recurrence g_k = g_{k-1} (k-1-α)/k.
    """
    if k < 0:
        raise DomainError("gen_binomial: k must be non-negative")
    g = 1.0
    for m in range(1, k + 1):
        g *= (m - 1 - alpha) / m
    return g


def gen_binomial_table(alpha: float, kmax: int):
    """Vector of ``gen_binomial(alpha, k)`` for k = 0..kmax (same recurrence)."""
    import numpy as np

    g = np.empty(kmax + 1)
    g[0] = 1.0
    acc = 1.0
    for m in range(1, kmax + 1):
        acc *= (m - 1 - alpha) / m
        g[m] = acc
    return g


def _sum_series(first: float, ratio, what: str, n_min: int = 0) -> float:
    """Sum t_0 = first, t_{n+1} = t_n * ratio(n) with the shared stop rule.

    The stop rule is armed only from term ``n_min`` on and while the term
    ratio is below 1 in magnitude: with negative lower parameters the terms
    can dip far below EPS and then grow again. Terms are carried with a
    separate binary exponent so such dips do not underflow.
    """
    s = _Neumaier(first)
    t = first
    shift = 0
    small = 0
    for n in range(MAX_TERMS):
        r = ratio(n)
        t *= r
        if t != 0.0 and abs(t) < 2.0**-500:
            t = math.ldexp(t, 500)
            shift -= 500
        elif shift and abs(t) > 2.0**500:
            t = math.ldexp(t, -500)
            shift += 500
        term = math.ldexp(t, shift) if shift else t
        s.add(term)
        if n >= n_min and abs(r) < 1.0 and abs(term) <= EPS * abs(s.value):
            small += 1
            if small == 2:
                return s.value
        else:
            small = 0
    raise AccuracyError(f"{what}: no convergence in {MAX_TERMS} terms", partial=s.value, estimate=abs(t))


def _arm_after(*lower: float) -> int:
    return max(0, *(math.ceil(-p) + 1 for p in lower))


def hyp1f2(a: float, b1: float, b2: float, z: float) -> float:
    """Power series for ₁F₂(a; b1, b2; z).

    Accurate to ~1e-16 times the largest term, so only usable for moderate
    |z|; for z = -(jπ/2)² the largest term grows like exp(|j|π).
    """
    if _is_pole(b1) or _is_pole(b2):
        raise DomainError("hyp1f2: lower parameter is a non-positive integer")
    if z == 0.0:
        return 1.0
    n_min = _arm_after(b1, b2)
    return _sum_series(1.0, lambda n: (a + n) * z / ((b1 + n) * (b2 + n) * (n + 1)), "hyp1f2", n_min)


def _hyp2f1_series(a: float, b: float, c: float, z: float) -> float:
    if _is_pole(c):
        raise DomainError("hyp2f1: c is a non-positive integer")
    n_min = _arm_after(c)
    return _sum_series(1.0, lambda n: (a + n) * (b + n) * z / ((c + n) * (n + 1)), "hyp2f1", n_min)


def hyp2f1_neg1(a: float, b: float, c: float) -> float:
    """₂F₁(a, b; c; -1) through the Euler transformation to argument 1/2.

    ₂F₁(a, b; c; -1) = 2^{-a} ₂F₁(a, c-b; c; 1/2), geometric convergence.
    """
    if a == 0.0:
        return 1.0
    return 2.0 ** (-a) * _hyp2f1_series(a, c - b, c, 0.5)


def gauss_2f1_at_1(a: float, b: float, c: float) -> float:
    """Gauss's closed form Γ(c)Γ(c-a-b) / (Γ(c-a)Γ(c-b)) for ₂F₁(a, b; c; 1)."""
    s = c - a - b
    if s <= 0:
        raise DomainError("gauss_2f1_at_1: requires c - a - b > 0")
    if _is_pole(c):
        raise DomainError("gauss_2f1_at_1: c is a non-positive integer")
    if _is_pole(c - a) or _is_pole(c - b):
        return 0.0
    lc, sc = log_gamma(c)
    ls, ss = log_gamma(s)
    l1, s1 = log_gamma(c - a)
    l2, s2 = log_gamma(c - b)
    return sc * ss * s1 * s2 * math.exp(lc + ls - l1 - l2)


_SI_SERIES_MAX = 4.0


def sine_integral(x: float) -> float:
    """Si(x) = ∫_0^x sin(t)/t dt.

    Power series for |x| <= 4; beyond that the auxiliary functions f, g are
    taken from the continued fraction of E_1(ix) (modified Lentz).
    """
    if x < 0:
        return -sine_integral(-x)
    if x == 0.0:
        return 0.0
    if x <= _SI_SERIES_MAX:
        x2 = x * x
        # t_n = (-1)^n x^{2n+1} / ((2n+1)(2n+1)!)
        s = _Neumaier(x)
        t = x
        for n in range(1, 200):
            t *= -x2 / ((2 * n) * (2 * n + 1))
            term = t / (2 * n + 1)
            s.add(term)
            if abs(term) <= EPS * abs(s.value):
                break
        return s.value
    tiny = 1e-300
    b = complex(1.0, x)
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(2, 100_000):
        an = -float((i - 1) ** 2)
        b += 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h *= delta
        if abs(delta.real - 1.0) + abs(delta.imag) < 1e-16:
            break
    else:
        raise AccuracyError("sine_integral: continued fraction did not converge")
    h *= cmath.exp(complex(0.0, -x))
    return math.pi / 2 + h.imag
