r"""Convolution weights ``w_j`` of the three discretisations.

Every weight is the inverse semi-discrete transform of the scheme's symbol,

.. math::

    w_j = -\frac{h^{-\alpha}}{\pi}\int_0^\pi M_e(\xi)\cos(j\xi)\,d\xi
          + \frac{h^{-\alpha}}{\pi}\beta\tan\frac{\alpha\pi}{2}
            \int_0^\pi M_o(\xi)\sin(j\xi)\,d\xi ,

evaluated in closed form where one exists. Tables store ``w_{-J..J}``
including the ``h^{-alpha}`` factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AccuracyError, ContractError, DomainError, UnsupportedSchemeError
from .quadrature import fourier_integral
from .specfun import gamma_ratio, gen_binomial_table, hyp1f2, hyp2f1_neg1, sine_integral
from .symbols import SchemeKind, StableParams

# Largest |j| for which the 1F2 series is summed directly. The largest
# series term grows like exp(|j| pi); beyond this the integrals go to
# quadrature.
J_SERIES = 5
DEFAULT_QUAD_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class WeightTable:
    """Dense window ``w_{-J}, ..., w_J`` for one (scheme, alpha, beta, h)."""

    scheme: SchemeKind
    params: StableParams
    h: float
    half_width: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != (2 * self.half_width + 1,):
            raise ContractError("WeightTable: values must have length 2J+1")
        if not np.all(np.isfinite(v)):
            raise AccuracyError("WeightTable: non-finite weight")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.half_width, self.half_width + 1)

    def __getitem__(self, j: int) -> float:
        if abs(j) > self.half_width:
            raise IndexError(f"weight index {j} outside table of half-width {self.half_width}")
        return float(self.values[j + self.half_width])

    @property
    def total(self) -> float:
        """Sum of all stored weights (tends to 0 as J grows)."""
        return math.fsum(self.values)


def _check(params: StableParams, h: float, J: int):
    if params.sigma != 1.0:
        raise DomainError("weights are defined for the normalised operator (sigma = 1)")
    if not h > 0:
        raise DomainError("h must be positive")
    if int(J) != J or J < 1:
        raise DomainError("half-width J must be an integer >= 1")


def _mirror_fill(pos_even: np.ndarray, pos_odd: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Extend cosine (even) and sine (odd) integrals from j >= 0 to j = -J..J."""
    even = np.concatenate((pos_even[:0:-1], pos_even))
    odd = np.concatenate((-pos_odd[:0:-1], pos_odd))
    return even, odd


def spectral_weights(params: StableParams, h: float, J: int, quad_tol: float = DEFAULT_QUAD_TOL) -> WeightTable:
    """Weights of the exact multiplier ``|xi|^alpha``.

    ``|j| <= J_SERIES`` uses the 1F2 closed forms, larger ``|j|`` integrate
    ``xi^alpha cos(j xi)`` and ``xi^alpha sin(j xi)`` numerically.
    At alpha = 1 the sine integral form is used for every j.
    """
    _check(params, h, J)
    a, b = params.alpha, params.beta
    js = np.arange(0, J + 1)

    if a == 1.0:
        w = np.empty(2 * J + 1)
        w[J] = -math.pi / (2 * h)
        log_nyq = math.log(math.pi / h)
        for j in range(1, J + 1):
            sgn = -1.0 if j % 2 else 1.0
            even = (1 - sgn) / (math.pi * j * j * h)
            si = sine_integral(j * math.pi)
            # odd part: (2b/(pi^2 h)) ∫_0^π ξ ln(ξ/h) sin(jξ) dξ
            odd_pos = -2 * b / (math.pi * math.pi * h * j * j) * (sgn * j * math.pi * log_nyq + si)
            w[J + j] = even + odd_pos
            w[J - j] = even - odd_pos
        return WeightTable(SchemeKind.SPECTRAL, params, h, J, w)

    cos_int = np.empty(J + 1)
    sin_int = np.empty(J + 1)
    pi_a1 = math.pi ** (a + 1)
    tol_int = 0.5 * quad_tol * h**a * math.pi / (1 + abs(b * params.tan_factor))
    for j in js:
        if j <= J_SERIES:
            z = -(j * math.pi) ** 2 / 4
            cos_int[j] = pi_a1 / (a + 1) * hyp1f2((a + 1) / 2, 0.5, (a + 3) / 2, z)
            sin_int[j] = j * math.pi ** (a + 2) / (a + 2) * hyp1f2(a / 2 + 1, 1.5, a / 2 + 2, z)
        else:
            cos_int[j] = _quad(lambda x: x**a, j, "cos", tol_int)
            sin_int[j] = _quad(lambda x: x**a, j, "sin", tol_int)
    return _assemble(SchemeKind.SPECTRAL, params, h, J, cos_int, sin_int)


def _quad(f, j, kind, tol):
    try:
        return fourier_integral(f, int(j), kind, tol)[0]
    except AccuracyError as exc:
        raise AccuracyError(f"weight j={j}: {exc}", exc.partial, exc.estimate) from exc


def _assemble(scheme, params, h, J, cos_pos, sin_pos) -> WeightTable:
    a, b = params.alpha, params.beta
    cos_all, sin_all = _mirror_fill(cos_pos, sin_pos)
    scale = h ** (-a) / math.pi
    w = -scale * cos_all + scale * b * params.tan_factor * sin_all
    return WeightTable(scheme, params, h, J, w)


def gl_weights(params: StableParams, h: float, J: int) -> WeightTable:
    """Grünwald-Letnikov weights (shifted by one index for alpha in (1, 2))."""
    _check(params, h, J)
    a, b = params.alpha, params.beta
    if a == 1.0:
        raise UnsupportedSchemeError("GL unsupported at alpha=1 (the weights are singular as alpha -> 1)")
    g = gen_binomial_table(a, J + 1)
    c = -1.0 / (2 * math.cos(a * math.pi / 2))
    gpad = np.concatenate((g, [0.0]))  # index -1 maps to the trailing zero

    def gk(k):
        k = np.asarray(k)
        return np.where(k >= 0, gpad[np.clip(k, -1, J + 1)], 0.0)

    m = np.arange(-J, J + 1)
    if a < 1:
        hw = c * ((1 + b) * gk(m) + (1 - b) * gk(-m))
    else:
        hw = c * ((1 + b) * gk(m + 1) + (1 - b) * gk(1 - m))
    return WeightTable(SchemeKind.GRUNWALD_LETNIKOV, params, h, J, hw * h ** (-a))


def rs_weights(params: StableParams, h: float, J: int, quad_tol: float = DEFAULT_QUAD_TOL) -> WeightTable:
    """Weights of the regularised multiplier ``(2 - 2cos xi)^{alpha/2}``.

    Closed form with gamma ratios and 2F1(.; -1) for alpha != 1. At
    alpha = 1 the odd part has no closed form and is integrated.
    """
    _check(params, h, J)
    a, b = params.alpha, params.beta
    if a == 1.0:
        w = np.empty(2 * J + 1)
        for j in range(-J, J + 1):
            # ∫_0^π sqrt(2-2cos ξ) cos(jξ) dξ = -Γ(j-1/2)/Γ(j+3/2)
            even = -gamma_ratio(j - 0.5, j + 1.5)
            w[J + j] = -even / (math.pi * h)
        if b != 0.0:
            log_h = math.log(h)

            def f(x):
                with np.errstate(divide="ignore", invalid="ignore"):
                    lg = np.where(x > 0, np.log(np.where(x > 0, x, 1.0)), 0.0)
                return 2 * np.sin(x / 2) * (lg - log_h)

            for j in range(1, J + 1):
                odd = _quad(f, j, "sin", quad_tol * h * math.pi**2 / (2 * abs(b)))
                w[J + j] += 2 * b / (math.pi**2 * h) * odd
                w[J - j] -= 2 * b / (math.pi**2 * h) * odd
        return WeightTable(SchemeKind.REGULARIZED_SPECTRAL, params, h, J, w)

    g = np.empty(J + 1)
    f = np.empty(J + 1)
    for j in range(J + 1):
        g[j], f[j] = _rs_terms(a, params.tan_factor, h, j)
    # w_j = (1+b) G_j + b F_j. The closed form is valid for negative j too
    # (rs_weight_formula), but the reflection w_{-j}(b) = w_j(-b) gives the
    # same numbers without the long 2F1 series at large negative j.
    pos = (1 + b) * g + b * f
    neg = (1 - b) * g - b * f
    w = np.concatenate((neg[:0:-1], pos))
    return WeightTable(SchemeKind.REGULARIZED_SPECTRAL, params, h, J, w)


def _rs_terms(a: float, tan_half: float, h: float, j: int) -> tuple[float, float]:
    """Gamma-ratio term G_j and 2F1 term F_j of the RS closed form (alpha != 1)."""
    ha = h ** (-a)
    g = ha * math.sin(math.pi * a / 2) * math.gamma(1 + a) * gamma_ratio(j - a / 2, j + 1 + a / 2) / math.pi
    sgn = -1.0 if j % 2 else 1.0
    f = -sgn * ha * tan_half * hyp2f1_neg1(-a, j - a / 2, j + 1 - a / 2) / (math.pi * (j - a / 2))
    return g, f


def rs_weight_formula(params: StableParams, h: float, j: int) -> float:
    """RS closed form evaluated directly at any integer ``j`` (alpha != 1)."""
    if params.alpha == 1.0:
        raise DomainError("rs_weight_formula: no closed form at alpha = 1")
    g, f = _rs_terms(params.alpha, params.tan_factor, h, int(j))
    return (1 + params.beta) * g + params.beta * f


def build_weights(scheme, params: StableParams, h: float, J: int, quad_tol: float = DEFAULT_QUAD_TOL) -> WeightTable:
    """Dispatch on ``scheme`` (a :class:`SchemeKind` or its short name)."""
    scheme = SchemeKind.parse(scheme)
    if scheme is SchemeKind.SPECTRAL:
        return spectral_weights(params, h, J, quad_tol)
    if scheme is SchemeKind.GRUNWALD_LETNIKOV:
        return gl_weights(params, h, J)
    return rs_weights(params, h, J, quad_tol)


def symbol_of_weights(table: WeightTable, xi):
    """``sum_j exp(-i xi j h) w_j``, i.e. the transform of the weights over h.

    Converges to ``psi_h(-xi)`` as the half-width grows.
    """
    x = np.atleast_1d(np.asarray(xi, dtype=float))
    phase = np.exp(-1j * np.outer(x, table.indices * table.h))
    out = phase @ table.values
    return complex(out[0]) if np.ndim(xi) == 0 else out
