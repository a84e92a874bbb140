# restoration/core/spectral.py
from __future__ import annotations

import logging
import math

import numpy as np

from restoration import conf
from restoration.exceptions import ArgumentError, NumericalError

from .linear_maps import LinearMap

logger = logging.getLogger(__name__)


def _start_vector(rng: np.random.Generator, dim: int) -> np.ndarray:
    # one re-draw, then give up
    for _ in range(2):
        x = rng.standard_normal(dim)
        norm = np.linalg.norm(x)
        if norm > 0.0:
            return x / norm
    raise NumericalError("power iteration: start vector vanished twice")


def estimate_operator_norm(
    A: LinearMap,
    max_iters: int | None = None,
    tol: float | None = None,
    seed: int | None = None,
) -> float:
    """
    Estimate ||A||_2 by power iteration on A^T A from a seeded random start.

    Stops when the relative change of the Rayleigh quotient is <= tol or after
    max_iters products. Deterministic for a fixed seed.
    """
    max_iters = conf.get("POWER_ITERATION_MAX_ITERS") if max_iters is None else max_iters
    tol = conf.get("POWER_ITERATION_TOL") if tol is None else tol
    seed = conf.get("POWER_ITERATION_SEED") if seed is None else seed
    if max_iters < 1:
        raise ArgumentError("max_iters must be >= 1")
    if not tol > 0:
        raise ArgumentError("tol must be > 0")

    rng = np.random.default_rng(seed)
    x = _start_vector(rng, A.dim_in)

    rayleigh = 0.0
    previous: float | None = None
    for it in range(1, max_iters + 1):
        y = A.apply_adjoint(A.apply(x))
        rayleigh = float(np.dot(x, y))
        y_norm = float(np.linalg.norm(y))
        if y_norm == 0.0:
            logger.debug("[PowerIteration] A^T A x = 0 at iteration %d, norm is 0", it)
            return 0.0
        x = y / y_norm
        if previous is not None and abs(rayleigh - previous) <= tol * abs(rayleigh):
            logger.debug("[PowerIteration] converged after %d iterations", it)
            break
        previous = rayleigh
    else:
        logger.debug("[PowerIteration] max_iters=%d reached", max_iters)

    return math.sqrt(max(rayleigh, 0.0))


def adjoint_defect(A: LinearMap, trials: int = 100, seed: int = 0) -> float:
    """max |<Ax, y> - <x, A^T y>| / (1 + ||x|| ||y||) over seeded random pairs."""
    if trials < 1:
        raise ArgumentError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        x = rng.standard_normal(A.dim_in)
        y = rng.standard_normal(A.dim_out)
        lhs = float(np.dot(A.apply(x), y))
        rhs = float(np.dot(x, A.apply_adjoint(y)))
        scale = 1.0 + float(np.linalg.norm(x) * np.linalg.norm(y))
        worst = max(worst, abs(lhs - rhs) / scale)
    return worst
