r"""Mean first exit time from (-1, 1) via the Toeplitz system ``A u = -1``.

With ``h = 1/N`` the unknowns are ``u_j`` for ``|j| <= N - 1``; the nodes
``x = ±1`` and everything beyond belong to the exterior where ``u = 0``.
The matrix entries are ``A_{jk} = w_{j-k}``.

Orientation. A weight table for ``(alpha, beta)`` has semi-discrete symbol
``psi_h(-xi)``, which discretises the generator of the reflected process
``-X``. :func:`solve_exit_time` therefore assembles from the table of
``(alpha, -beta)`` so that the result is the exit time of the process whose
characteristic exponent is ``psi_exact(xi; alpha, beta)``, the same process
sampled by :mod:`levygen.montecarlo`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import ContractError, DomainError, SolverError
from .symbols import SchemeKind, StableParams
from .weights import DEFAULT_QUAD_TOL, WeightTable, build_weights

RESIDUAL_TOL = 1e-10
LEVINSON_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class ToeplitzSystem:
    """``A`` given by its first column and first row; rhs ``b``."""

    column: np.ndarray
    row: np.ndarray
    rhs: np.ndarray

    @property
    def size(self) -> int:
        return self.rhs.size

    def dense(self) -> np.ndarray:
        return scipy.linalg.toeplitz(self.column, self.row)

    def matvec(self, u: np.ndarray) -> np.ndarray:
        return scipy.linalg.matmul_toeplitz((self.column, self.row), u)


def grid_size(h: float) -> int:
    """N with ``h * N = 1``; rejects spacings that do not divide the interval."""
    if not h > 0:
        raise DomainError("h must be positive")
    n = round(1.0 / h)
    if n < 1 or not math.isclose(n * h, 1.0, rel_tol=1e-12):
        raise DomainError(f"1/h must be an integer, got h={h!r}")
    return n


def assemble(table: WeightTable, N: int) -> ToeplitzSystem:
    """Toeplitz system on the ``2N - 1`` interior nodes."""
    if N < 1:
        raise ContractError("N must be >= 1")
    if not math.isclose(table.h * N, 1.0, rel_tol=1e-12):
        raise ContractError(f"table spacing {table.h!r} does not match N={N}")
    need = 2 * N - 2
    if table.half_width < need:
        raise ContractError(f"table half-width {table.half_width} < 2N-2 = {need}")
    n = 2 * N - 1
    J = table.half_width
    # A[j, k] = w_{j-k}: column holds w_0, w_1, ..., row holds w_0, w_{-1}, ...
    column = np.array(table.values[J : J + n])
    row = np.array(table.values[J - n + 1 : J + 1][::-1])
    return ToeplitzSystem(column, row, -np.ones(n))


@dataclass(frozen=True, eq=False)
class ExitTimeSolution:
    scheme: SchemeKind
    params: StableParams
    h: float
    values: np.ndarray = field(repr=False)
    residual: float = 0.0

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def N(self) -> int:
        return (self.values.size + 1) // 2

    @property
    def x(self) -> np.ndarray:
        """Interior nodes ``jh``, ``|j| < N``."""
        return np.arange(-(self.N - 1), self.N) * self.h

    def with_boundary(self) -> tuple[np.ndarray, np.ndarray]:
        """Nodes ``-1 .. 1`` and values including the two boundary zeros."""
        x = np.arange(-self.N, self.N + 1) * self.h
        return x, np.concatenate(([0.0], self.values, [0.0]))

    def at(self, x: float) -> float:
        """Value at a grid node ``x`` (0 outside the interior)."""
        j = round(x / self.h)
        if not math.isclose(j * self.h, x, abs_tol=1e-9):
            raise DomainError(f"x={x} is not a grid node")
        if abs(j) >= self.N:
            return 0.0
        return float(self.values[j + self.N - 1])

    def oscillation_count(self, band: float = 0.2) -> int:
        """Sign changes of the second difference within ``band`` of x = ±1.

        A measured diagnostic of boundary oscillations, not a pass/fail bound.
        """
        _, u = self.with_boundary()
        d2 = np.diff(u, 2)
        xm = np.arange(-self.N + 1, self.N) * self.h
        near = np.abs(xm) >= 1 - band - 1e-12
        left = np.sign(d2[near & (xm < 0)])
        right = np.sign(d2[near & (xm > 0)])
        return int(sum(np.count_nonzero(np.diff(g[g != 0])) for g in (left, right)))


def solve_system(system: ToeplitzSystem, method: str = "dense") -> tuple[np.ndarray, float]:
    """Solve and verify the residual; returns ``(u, relative residual)``."""
    b = system.rhs
    if method == "dense":
        A = system.dense()
        try:
            lu = scipy.linalg.lu_factor(A, check_finite=True)
        except (ValueError, np.linalg.LinAlgError) as exc:
            raise SolverError(f"factorisation failed: {exc}") from exc
        if np.any(np.diag(lu[0]) == 0):
            raise SolverError("matrix is singular", condition=math.inf)
        u = scipy.linalg.lu_solve(lu, b)
    elif method == "levinson":
        try:
            u = scipy.linalg.solve_toeplitz((system.column, system.row), b)
        except np.linalg.LinAlgError as exc:
            raise SolverError(f"Levinson recursion failed: {exc}") from exc
    else:
        raise ContractError(f"unknown solver method {method!r}")
    res = float(np.max(np.abs(system.matvec(u) - b)) / np.max(np.abs(b)))
    if not np.all(np.isfinite(u)) or res > RESIDUAL_TOL:
        cond = float(np.linalg.cond(system.dense())) if system.size <= 4000 else None
        raise SolverError(f"residual {res:.3g} exceeds {RESIDUAL_TOL:g}", condition=cond)
    return u, res


def solve_exit_time(
    scheme,
    params: StableParams,
    h: float,
    method: str = "dense",
    quad_tol: float = DEFAULT_QUAD_TOL,
    check_levinson: bool = False,
) -> ExitTimeSolution:
    """Exit time of the process with exponent ``psi_exact(.; params)``.

    ``method`` is ``"dense"`` (LU) or ``"levinson"``. With
    ``check_levinson`` the dense solve is repeated by Levinson recursion and
    the two must agree to ``LEVINSON_TOL`` relative.
    """
    kind = SchemeKind.parse(scheme)
    N = grid_size(h)
    h = 1.0 / N
    table = build_weights(kind, params.mirrored(), h, max(1, 2 * N - 2), quad_tol)
    system = assemble(table, N)
    u, res = solve_system(system, method)
    if check_levinson:
        other, _ = solve_system(system, "levinson" if method == "dense" else "dense")
        gap = float(np.max(np.abs(u - other)) / np.max(np.abs(u)))
        if gap > LEVINSON_TOL:
            raise SolverError(f"dense and Levinson solutions differ by {gap:.3g}")
    return ExitTimeSolution(kind, params, h, u, res)
