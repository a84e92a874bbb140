# restoration/solvers/prox.py
from __future__ import annotations

import math

import numpy as np

from restoration.core.operators import Preconditioner, check_same_dim
from restoration.exceptions import ArgumentError

from .terms import ProxTerm, SmoothTerm


def _shrink(x: np.ndarray, thresholds) -> np.ndarray:
    return np.sign(x) * np.maximum(np.abs(x) - thresholds, 0.0)


def soft_threshold(x: np.ndarray, phi: float) -> np.ndarray:
    """Proximal operator of phi * ||.||_1, coordinate-wise."""
    if not (math.isfinite(phi) and phi >= 0):
        raise ArgumentError(f"soft threshold needs phi >= 0, got {phi}")
    return _shrink(x, phi)


def weighted_resolvent_l1(
    x: np.ndarray, lam: float, rho: float, M: Preconditioner
) -> np.ndarray:
    """
    (I + lam M^-1 d(rho ||.||_1))^-1 x for diagonal M: per coordinate it solves
    min_y rho |y_i| + (M_ii / 2 lam)(y_i - x_i)^2, i.e. a soft threshold at
    lam * rho / M_ii.
    """
    if not lam > 0:
        raise ArgumentError(f"resolvent needs lambda > 0, got {lam}")
    if not rho >= 0:
        raise ArgumentError(f"resolvent needs rho >= 0, got {rho}")
    check_same_dim(x, M.diag)
    if rho == 0:
        return x.copy()
    return _shrink(x, (lam * rho) / M.diag)


def grad_least_squares(h: SmoothTerm, x: np.ndarray) -> np.ndarray:
    """grad h(x) = A^T (A x - b)."""
    return h.observation_map.apply_adjoint(h.residual(x))


def forward_step(x: np.ndarray, lam: float, M: Preconditioner, h: SmoothTerm) -> np.ndarray:
    """(I - lam M^-1 grad h)(x)."""
    return x - lam * M.apply_inverse(grad_least_squares(h, x))


def fb_map(
    x: np.ndarray, lam: float, M: Preconditioner, h: SmoothTerm, g: ProxTerm
) -> np.ndarray:
    """J(x) = (I + lam M^-1 dg)^-1 (I - lam M^-1 grad h)(x)."""
    if not lam > 0:
        raise ArgumentError(f"fb_map needs lambda > 0, got {lam}")
    return weighted_resolvent_l1(forward_step(x, lam, M, h), lam, g.weight, M)
