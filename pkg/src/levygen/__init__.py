"""Finite-difference generators of skewed alpha-stable processes.

Weight tables for three discretisations (exact spectral symbol,
Grünwald-Letnikov, regularised spectral), their application as convolutions,
and two ways to compute mean first exit times from (-1, 1): a Toeplitz
linear solve and Monte Carlo simulation.
"""

__version__ = "0.1.0"

from .errors import (
    AccuracyError,
    ContractError,
    DomainError,
    EstimateError,
    LevyGenError,
    SolverError,
    UnsupportedSchemeError,
)
from .symbols import LevyConstants, SchemeKind, StableParams, levy_constants, psi_exact, psi_h, rescaled_multiplier
from .weights import WeightTable, build_weights, gl_weights, rs_weights, spectral_weights, symbol_of_weights
from .operator import GridFunction, SpectrumOracle, apply, apply_gauge, convergence_study, reference_apply, sdft
from .exit_time import ExitTimeSolution, assemble, solve_exit_time
from .montecarlo import McConfig, McEstimate, mc_exit_estimate, sample_standard_stable, simulate_exit
