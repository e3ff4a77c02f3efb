r"""Stable-process parameters, Lévy constants and Fourier symbols.

Sign conventions
----------------
``psi_exact(xi)`` is the characteristic exponent of the unit-time increment,
``E exp(i xi X_1) = exp(psi_exact(xi))``:

.. math::

    \psi(\xi) = -|\xi|^\alpha \bigl(1 - i\beta\,\mathrm{sgn}(\xi)\tan(\pi\alpha/2)\bigr),
    \qquad
    \psi(\xi) = -|\xi| \bigl(1 - i\tfrac{2\beta}{\pi}\mathrm{sgn}(\xi)\ln|\xi|\bigr)
    \quad (\alpha = 1).

The discrete operators built in :mod:`levygen.weights` are convolutions
whose semi-discrete transform is ``psi_h(-xi)``, with ``psi_h`` the
discrete counterpart of ``psi_exact``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ContractError, DomainError, UnsupportedSchemeError
from .specfun import log_gamma

EULER_GAMMA = 0.5772156649015329


@dataclass(frozen=True)
class StableParams:
    """Stability index ``alpha``, skewness ``beta`` and scale ``sigma``."""

    alpha: float
    beta: float = 0.0
    sigma: float = 1.0

    def __post_init__(self):
        for name in ("alpha", "beta", "sigma"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if not 0.0 < self.alpha < 2.0:
            raise DomainError(f"alpha must lie in (0, 2), got {self.alpha}")
        if not -1.0 <= self.beta <= 1.0:
            raise DomainError(f"beta must lie in [-1, 1], got {self.beta}")
        if self.sigma <= 0.0:
            raise DomainError(f"sigma must be positive, got {self.sigma}")

    def mirrored(self) -> StableParams:
        """Parameters of the reflected process ``-X``."""
        return StableParams(self.alpha, -self.beta, self.sigma)

    @property
    def tan_factor(self) -> float:
        """tan(pi alpha / 2); infinite at alpha = 1."""
        if self.alpha == 1.0:
            return math.inf
        return math.tan(math.pi * self.alpha / 2)


@dataclass(frozen=True)
class LevyConstants:
    """Jump intensities ``C_+``, ``C_-`` of the Lévy measure and the drift ``K``."""

    c_plus: float
    c_minus: float
    c_alpha: float
    k_drift: float

    @property
    def beta(self) -> float:
        return (self.c_plus - self.c_minus) / self.c_alpha


class SchemeKind(str, enum.Enum):
    SPECTRAL = "sp"
    GRUNWALD_LETNIKOV = "gl"
    REGULARIZED_SPECTRAL = "rs"

    @classmethod
    def parse(cls, value) -> SchemeKind:
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise DomainError(f"unknown scheme {value!r}; expected one of sp, gl, rs") from None


class MultiplierValue(NamedTuple):
    m_e: float | np.ndarray
    m_o: float | np.ndarray


def levy_constants(params: StableParams, c_alpha: float | None = None) -> LevyConstants:
    """Convert (alpha, beta, sigma) to the Lévy-measure constants.

    At ``alpha == 1`` the normalising constant has no finite expression in
    terms of Γ(-alpha); it must then be passed explicitly as ``c_alpha``.
    """
    a, b = params.alpha, params.beta
    if a == 1.0:
        if c_alpha is None:
            raise DomainError("levy_constants: C_alpha is undefined at alpha = 1; pass c_alpha explicitly")
        if not c_alpha > 0:
            raise DomainError("levy_constants: c_alpha must be positive")
    else:
        if c_alpha is not None:
            raise ContractError("levy_constants: c_alpha is derived from sigma when alpha != 1")
        lg, sg = log_gamma(-a)
        c_alpha = -(params.sigma**a) / (sg * math.exp(lg) * math.cos(math.pi * a / 2))
    c_plus = c_alpha * (1 + b) / 2
    c_minus = c_alpha * (1 - b) / 2
    if a == 1.0:
        k = (1 - EULER_GAMMA) * (c_plus - c_minus)
    else:
        k = (c_minus - c_plus) / (1 - a)
    return LevyConstants(c_plus, c_minus, c_alpha, k)


def _xlogx(x):
    """x*ln(x) with the removable singularity at 0 filled in."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(x > 0, x * np.log(np.where(x > 0, x, 1.0)), 0.0)


def _scalar_or_array(x, like):
    return x.item() if np.ndim(like) == 0 else x


def psi_exact(xi, params: StableParams):
    """Characteristic exponent of the stable law, vectorised over ``xi``.

    The scale enters as ``psi_sigma(xi) = psi_1(sigma xi)`` (law of sigma X).
    """
    x = params.sigma * np.asarray(xi, dtype=float)
    ax = np.abs(x)
    sgn = np.sign(x)
    if params.alpha == 1.0:
        val = -ax + 1j * (2 * params.beta / math.pi) * sgn * _xlogx(ax)
    else:
        p = ax**params.alpha
        val = -p + 1j * params.beta * params.tan_factor * sgn * p
    return _scalar_or_array(np.asarray(val, dtype=complex), xi)


def rescaled_multiplier(scheme, alpha: float, xi) -> MultiplierValue:
    """Even and odd rescaled multipliers ``M_e``, ``M_o`` on [-pi, pi].

    For alpha = 1 both components are the modulus part (the odd symbol of
    the alpha = 1 schemes carries an extra logarithm, see :func:`psi_h`).
    """
    scheme = SchemeKind.parse(scheme)
    if not 0.0 < alpha < 2.0:
        raise DomainError("alpha must lie in (0, 2)")
    ax = np.abs(np.asarray(xi, dtype=float))
    if np.any(ax > math.pi * (1 + 1e-14)):
        raise DomainError("rescaled_multiplier: xi must lie in [-pi, pi]")
    if scheme is SchemeKind.SPECTRAL:
        m = ax**alpha
        m_e = m_o = m
    elif scheme is SchemeKind.REGULARIZED_SPECTRAL:
        # (2 - 2cos xi)^{alpha/2} written without cancellation near 0
        m = (2 * np.sin(ax / 2)) ** alpha
        m_e = m_o = m
    else:
        if alpha == 1.0:
            raise UnsupportedSchemeError("GL unsupported at alpha=1")
        base = (2 * np.sin(ax / 2)) ** alpha
        phase = (math.pi - ax) * alpha / 2
        if alpha > 1:
            phase = phase + ax
        m_e = np.cos(phase) / math.cos(alpha * math.pi / 2) * base
        m_o = np.sin(phase) / math.sin(alpha * math.pi / 2) * base
    return MultiplierValue(_scalar_or_array(np.asarray(m_e), xi), _scalar_or_array(np.asarray(m_o), xi))


def psi_h(scheme, params: StableParams, h: float, xi):
    """Discrete symbol of a scheme on [-pi/h, pi/h].

    ``psi_h(xi) = -h^{-a} M_e(h xi) + i beta h^{-a} M_o(h xi) sgn(xi) tan(pi a/2)``
    for alpha != 1; at alpha = 1 the odd part is
    ``(2 beta / pi) h^{-1} M(h xi) ln|xi| sgn(xi)``. The spectral scheme
    reproduces :func:`psi_exact` exactly on the band.
    """
    scheme = SchemeKind.parse(scheme)
    if params.sigma != 1.0:
        raise DomainError("psi_h: discrete symbols are defined for sigma = 1")
    if h <= 0:
        raise DomainError("h must be positive")
    x = np.asarray(xi, dtype=float)
    if np.any(np.abs(x) > math.pi / h * (1 + 1e-14)):
        raise DomainError("psi_h: |xi| must not exceed pi/h")
    hx = np.clip(h * x, -math.pi, math.pi)
    me, mo = rescaled_multiplier(scheme, params.alpha, hx)
    me = np.asarray(me) * h ** (-params.alpha)
    mo = np.asarray(mo) * h ** (-params.alpha)
    sgn = np.sign(x)
    if params.alpha == 1.0:
        ax = np.abs(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            logx = np.where(ax > 0, np.log(np.where(ax > 0, ax, 1.0)), 0.0)
        val = -me + 1j * (2 * params.beta / math.pi) * sgn * mo * logx
    else:
        val = -me + 1j * params.beta * params.tan_factor * sgn * mo
    return _scalar_or_array(np.asarray(val, dtype=complex), xi)
