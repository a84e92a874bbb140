# restoration/solvers/steps.py
"""
One iteration of every forward-backward variant.

Each step maps (x_{n-1}, x_n) to x_{n+1}. J denotes the preconditioned
forward-backward map fb_map(., lam, M, h, g).
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from restoration.core.operators import Preconditioner
from restoration.exceptions import ArgumentError

from .config import Algorithm, SolverConfig
from .prox import fb_map, grad_least_squares, weighted_resolvent_l1
from .terms import Problem


class IterState(NamedTuple):
    x_prev: np.ndarray
    x_curr: np.ndarray


def resolve_preconditioner(cfg: SolverConfig, problem: Problem) -> Preconditioner:
    """cfg.preconditioner, or L_h * identity when the config leaves it open."""
    if cfg.preconditioner is not None:
        return cfg.preconditioner
    return Preconditioner.scalar(problem.smooth.lipschitz, problem.dim)


def _require(cfg: SolverConfig, *allowed: Algorithm) -> None:
    if cfg.algorithm not in allowed:
        names = "|".join(a.value for a in allowed)
        raise ArgumentError(f"step expects algorithm {names}, got '{cfg.algorithm.value}'")


def _extrapolate(state: IterState, theta: float) -> np.ndarray:
    if theta == 0.0:
        return state.x_curr
    return state.x_curr + theta * (state.x_curr - state.x_prev)


def _s_iteration(y: np.ndarray, alpha: float, lam: float, M: Preconditioner, problem: Problem) -> np.ndarray:
    """J((1 - alpha) y + alpha J(y))."""
    h, g = problem.smooth, problem.prox
    u = (1.0 - alpha) * y + alpha * fb_map(y, lam, M, h, g)
    return fb_map(u, lam, M, h, g)


def step_classical(state: IterState, n: int, cfg: SolverConfig, problem: Problem) -> np.ndarray:
    _require(cfg, Algorithm.FBS, Algorithm.PROX_GRAD, Algorithm.MOUDAFI_OLINY)
    M = resolve_preconditioner(cfg, problem)
    lam = cfg.lam_at(n)
    h, g = problem.smooth, problem.prox

    if cfg.algorithm != Algorithm.MOUDAFI_OLINY:
        return fb_map(state.x_curr, lam, M, h, g)

    # inertia on the resolvent input, gradient taken at x_n (not y_n)
    y = _extrapolate(state, cfg.theta_at(n, state.x_curr, state.x_prev, M))
    forward = y - lam * M.apply_inverse(grad_least_squares(h, state.x_curr))
    return weighted_resolvent_l1(forward, lam, g.weight, M)


def step_lorenz_pock(state: IterState, n: int, cfg: SolverConfig, problem: Problem) -> np.ndarray:
    _require(cfg, Algorithm.LORENZ_POCK)
    M = resolve_preconditioner(cfg, problem)
    y = _extrapolate(state, cfg.theta_at(n, state.x_curr, state.x_prev, M))
    return fb_map(y, cfg.lam_at(n), M, problem.smooth, problem.prox)


def step_apfbnsm(state: IterState, n: int, cfg: SolverConfig, problem: Problem) -> np.ndarray:
    _require(cfg, Algorithm.APFBNSM)
    M = resolve_preconditioner(cfg, problem)
    y = _extrapolate(state, cfg.theta_at(n, state.x_curr, state.x_prev, M))
    return _s_iteration(y, cfg.alpha.value(n), cfg.lam, M, problem)


def step_new(state: IterState, n: int, cfg: SolverConfig, problem: Problem) -> np.ndarray:
    _require(cfg, Algorithm.NEW)
    M = resolve_preconditioner(cfg, problem)
    y = _extrapolate(state, cfg.theta_at(n, state.x_curr, state.x_prev, M))
    z = _s_iteration(y, cfg.alpha.value(n), cfg.lam, M, problem)
    jz = fb_map(z, cfg.lam, M, problem.smooth, problem.prox)
    beta = cfg.beta.value(n)
    if beta == 0.0:
        return jz
    return beta * cfg.contraction(z) + (1.0 - beta) * jz


def ns_fbsa_step(x: np.ndarray, alpha: float, lam: float, problem: Problem) -> np.ndarray:
    """Normal S-iteration forward-backward step, unpreconditioned (M = I)."""
    return _s_iteration(x, alpha, lam, Preconditioner.identity(problem.dim), problem)
