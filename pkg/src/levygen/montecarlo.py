"""Monte Carlo exit times for skewed alpha-stable processes.

Variates come from the Chambers-Mallows-Stuck transform, parameterised so
that ``E exp(i xi Z) = exp(psi_exact(xi))``. A path is advanced with Euler
steps ``X <- X + sigma dt^{1/alpha} Z``; at ``alpha = 1`` self-similarity
holds only up to a drift, so the increment over ``dt`` is
``sigma dt Z - (2 beta / pi) sigma dt ln(dt)``.

Every path draws from its own Philox substream, keyed by ``(seed, path)``,
and consumes random numbers in fixed blocks. A path's exit time therefore
does not depend on how paths are grouped or scheduled.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ContractError, DomainError, EstimateError
from .symbols import StableParams

BLOCK_STEPS = 1024
CHUNK_PATHS = 256


@dataclass(frozen=True)
class McConfig:
    n_paths: int = 10_000
    dt: float = 1e-4
    seed: int = 0
    max_time: float = 1e3

    def __post_init__(self):
        if int(self.n_paths) != self.n_paths or self.n_paths < 1:
            raise ContractError("n_paths must be a positive integer")
        if not self.dt > 0:
            raise ContractError("dt must be positive")
        if not self.max_time >= self.dt:
            raise ContractError("max_time must be at least dt")
        if not 0 <= int(self.seed) < 2**64:
            raise ContractError("seed must be a 64-bit unsigned integer")

    @property
    def max_steps(self) -> int:
        return max(1, int(math.floor(self.max_time / self.dt + 1e-9)))


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    n_paths: int
    censored: int
    single_path: bool = False


def path_rng(seed: int, path: int) -> np.random.Generator:
    """Independent counter-based substream for one path."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed), spawn_key=(int(path),))))


def cms_transform(alpha: float, beta: float, v, w):
    """Map ``v ~ U(-pi/2, pi/2)``, ``w ~ Exp(1)`` to a standard stable variate."""
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    if alpha == 1.0:
        # The usual alpha = 1 branch has exponent -|xi|(1 + i(2b/pi) sgn ln|xi|);
        # reflecting beta gives the convention used here.
        b = -beta
        half_pi = 0.5 * math.pi
        bv = half_pi + b * v
        return (bv * np.tan(v) - b * np.log(half_pi * w * np.cos(v) / bv)) / half_pi
    t = beta * math.tan(0.5 * math.pi * alpha)
    shift = math.atan(t) / alpha
    scale = (1.0 + t * t) ** (0.5 / alpha)
    av = alpha * (v + shift)
    cv = np.cos(v)
    return scale * np.sin(av) / cv ** (1.0 / alpha) * (np.cos(v - av) / w) ** ((1.0 - alpha) / alpha)


def sample_standard_stable(alpha: float, beta: float, rng: np.random.Generator, size=None):
    """Standard stable variate(s) with exponent ``psi_exact(.; alpha, beta, 1)``."""
    StableParams(alpha, beta)  # validates the ranges
    n = 1 if size is None else size
    v = math.pi * (rng.random(n) - 0.5)
    w = rng.standard_exponential(n)
    z = cms_transform(alpha, beta, v, w)
    return float(z[0]) if size is None else z


def _increment_law(params: StableParams, dt: float) -> tuple[float, float]:
    """``(scale, drift)`` so that an increment is ``scale * Z + drift``."""
    a, s = params.alpha, params.sigma
    if a == 1.0:
        c = s * dt
        return c, -2.0 * params.beta / math.pi * c * math.log(dt)
    return s * dt ** (1.0 / a), 0.0


def _run_paths(x0: float, params: StableParams, cfg: McConfig, rngs) -> np.ndarray:
    """Exit step counts for a group of paths (``-1`` marks a censored path)."""
    scale, drift = _increment_law(params, cfg.dt)
    n = len(rngs)
    pos = np.full(n, float(x0))
    steps = np.full(n, -1, dtype=np.int64)
    active = np.arange(n)
    done = 0
    while active.size and done < cfg.max_steps:
        m = min(BLOCK_STEPS, cfg.max_steps - done)
        v = np.empty((active.size, m))
        w = np.empty((active.size, m))
        for r, i in enumerate(active):
            v[r] = rngs[i].random(m)
            w[r] = rngs[i].standard_exponential(m)
        z = cms_transform(params.alpha, params.beta, math.pi * (v - 0.5), w)
        path = pos[active, None] + np.cumsum(scale * z + drift, axis=1)
        out = np.abs(path) >= 1.0
        hit = out.any(axis=1)
        first = out.argmax(axis=1)
        steps[active[hit]] = done + first[hit] + 1
        pos[active] = path[:, -1]
        active = active[~hit]
        done += m
    return steps


def _check_start(x0: float):
    if not math.isfinite(x0) or abs(x0) >= 1.0:
        raise ContractError(f"start point must satisfy |x0| < 1, got {x0!r}")


def simulate_exit(x0: float, params: StableParams, cfg: McConfig, rng: np.random.Generator) -> float:
    """Exit time of one path; ``cfg.max_time`` reached means censored (returns ``inf``)."""
    _check_start(x0)
    s = int(_run_paths(x0, params, cfg, [rng])[0])
    return math.inf if s < 0 else s * cfg.dt


def worker_count() -> int:
    env = os.environ.get("LEVYGEN_THREADS")
    cap = os.cpu_count() or 1
    if env:
        try:
            cap = max(1, int(env))
        except ValueError:
            raise ContractError(f"LEVYGEN_THREADS must be an integer, got {env!r}") from None
    return cap


def exit_steps(x0: float, params: StableParams, cfg: McConfig, workers: int | None = None) -> np.ndarray:
    """Exit step count for every path, indexed by path number."""
    _check_start(x0)
    chunks = [range(a, min(a + CHUNK_PATHS, cfg.n_paths)) for a in range(0, cfg.n_paths, CHUNK_PATHS)]

    def run(chunk):
        return _run_paths(x0, params, cfg, [path_rng(cfg.seed, p) for p in chunk])

    workers = worker_count() if workers is None else max(1, int(workers))
    if workers == 1 or len(chunks) == 1:
        parts = [run(c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, chunks))
    return np.concatenate(parts)


def mc_exit_estimate(x0: float, params: StableParams, cfg: McConfig, workers: int | None = None) -> McEstimate:
    """Mean exit time and its standard error over the uncensored paths."""
    if not isinstance(params, StableParams):
        raise DomainError("params must be StableParams")
    steps = exit_steps(x0, params, cfg, workers)
    ok = steps >= 0
    censored = int(np.count_nonzero(~ok))
    n_ok = steps.size - censored
    if n_ok == 0:
        raise EstimateError(f"all {steps.size} paths were censored at max_time={cfg.max_time}")
    times = steps[ok] * cfg.dt
    mean = math.fsum(times) / n_ok
    if n_ok == 1:
        return McEstimate(mean, 0.0, cfg.n_paths, censored, single_path=True)
    var = math.fsum((times - mean) ** 2) / (n_ok - 1)
    return McEstimate(mean, math.sqrt(var / n_ok), cfg.n_paths, censored)
