# restoration/solvers/diagnostics.py
from __future__ import annotations

import logging

import numpy as np

from restoration.core.operators import Preconditioner, m_norm
from restoration.exceptions import ArgumentError, DivergenceError

from .prox import fb_map, grad_least_squares
from .terms import Problem, ProxTerm, SmoothTerm

logger = logging.getLogger(__name__)


def fixed_point_residual(
    x: np.ndarray, lam: float, M: Preconditioner, h: SmoothTerm, g: ProxTerm
) -> float:
    """||J(x) - x||_M; zero exactly at solutions of 0 in (dg + grad h)(x)."""
    return m_norm(fb_map(x, lam, M, h, g) - x, M)


def lasso_kkt_residual(x: np.ndarray, h: SmoothTerm, rho: float) -> float:
    """
    Max-norm distance of -grad h(x) from d(rho ||.||_1)(x):
    |g_i + rho sign(x_i)| where x_i != 0, max(0, |g_i| - rho) where x_i == 0.
    """
    if not rho >= 0:
        raise ArgumentError(f"rho must be >= 0, got {rho}")
    grad = grad_least_squares(h, x)
    per_coord = np.where(
        x != 0.0,
        np.abs(grad + rho * np.sign(x)),
        np.maximum(np.abs(grad) - rho, 0.0),
    )
    return float(np.max(per_coord))


def solve_reference(
    problem: Problem, iters: int = 100_000, tol: float = 1e-14, x0: np.ndarray | None = None
) -> tuple[np.ndarray, int]:
    """
    Plain proximal-gradient loop with M = L_h * I and lam = 1, without trace
    bookkeeping. Stops once ||x_{k+1} - x_k||_M <= tol (1 + ||x_k||_M).
    Returns (x, iterations used).
    """
    M = Preconditioner.scalar(problem.smooth.lipschitz, problem.dim)
    h, g = problem.smooth, problem.prox
    x = np.zeros(problem.dim) if x0 is None else np.array(x0, dtype=np.float64)
    for k in range(1, iters + 1):
        x_next = fb_map(x, 1.0, M, h, g)
        if not np.all(np.isfinite(x_next)):
            raise DivergenceError(k)
        moved = m_norm(x_next - x, M)
        x = x_next
        if moved <= tol * (1.0 + m_norm(x, M)):
            logger.debug("[Reference] converged after %d iterations", k)
            return x, k
    logger.debug("[Reference] stopped at iters=%d", iters)
    return x, iters
