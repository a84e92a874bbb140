# restoration/solvers/config.py
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any

import numpy as np

from restoration import conf
from restoration.core.operators import Preconditioner, m_norm
from restoration.exceptions import ArgumentError, ConfigError

from .schedules import Schedule, ScheduleRole
from .terms import Contraction

logger = logging.getLogger(__name__)


class Algorithm(str, Enum):
    FBS = "fbs"
    PROX_GRAD = "prox-grad"
    MOUDAFI_OLINY = "moudafi-oliny"
    LORENZ_POCK = "lorenz-pock"
    APFBNSM = "apfbnsm"
    NEW = "new"


CLASSICAL = frozenset({Algorithm.FBS, Algorithm.PROX_GRAD, Algorithm.MOUDAFI_OLINY})
INERTIAL = frozenset({Algorithm.MOUDAFI_OLINY, Algorithm.LORENZ_POCK, Algorithm.APFBNSM, Algorithm.NEW})
CONSTANT_LAMBDA = frozenset({Algorithm.APFBNSM, Algorithm.NEW})


class ThetaMode(str, Enum):
    CONSTANT = "constant"  # theta_n straight from the schedule
    ADAPTIVE = "adaptive"  # min(theta_n, c / (n^2 max(||x_n - x_n-1||_M, eps)))


ADAPTIVE_EPS = 1e-12


def parse_algorithm(name: str) -> Algorithm:
    try:
        return Algorithm((name or "").strip().lower())
    except ValueError:
        valid = ", ".join(a.value for a in Algorithm)
        raise ArgumentError(f"unknown algorithm '{name}'. Expected one of: {valid}") from None


@dataclass(frozen=True, eq=False)
class SolverConfig:
    algorithm: Algorithm
    lam: float = 0.99
    theta: Schedule = field(default_factory=lambda: Schedule.constant(0.0, ScheduleRole.THETA))
    alpha: Schedule = field(default_factory=lambda: Schedule.constant(0.5, ScheduleRole.ALPHA))
    beta: Schedule = field(default_factory=lambda: Schedule.harmonic(0.1, ScheduleRole.BETA))
    contraction: Contraction = field(default_factory=lambda: Contraction(0.99))
    # None -> L_h * identity, resolved by the driver from the smooth term
    preconditioner: Preconditioner | None = None
    max_iters: int = 1000
    stop_tol: float = field(default_factory=lambda: conf.get("DEFAULT_STOP_TOL"))
    lam_schedule: Schedule | None = None
    theta_mode: ThetaMode = ThetaMode.CONSTANT
    theta_adaptive_c: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "algorithm", Algorithm(self.algorithm))
        object.__setattr__(self, "theta_mode", ThetaMode(self.theta_mode))

    def lam_at(self, n: int) -> float:
        if self.lam_schedule is not None and self.algorithm not in CONSTANT_LAMBDA:
            return self.lam_schedule.value(n)
        return self.lam

    def theta_at(self, n: int, x_curr: np.ndarray, x_prev: np.ndarray, M: Preconditioner) -> float:
        theta = self.theta.value(n)
        if self.theta_mode == ThetaMode.ADAPTIVE and theta > 0.0:
            step = max(m_norm(x_curr - x_prev, M), ADAPTIVE_EPS)
            theta = min(theta, self.theta_adaptive_c / (n * n * step))
        return theta

    def with_preconditioner(self, M: Preconditioner) -> "SolverConfig":
        return replace(self, preconditioner=M)

    def echo(self) -> dict[str, Any]:
        """Plain-data summary for trace headers and run records."""
        return {
            "algorithm": self.algorithm.value,
            "lambda": self.lam,
            "lambda_schedule": self.lam_schedule.describe() if self.lam_schedule else None,
            "theta": self.theta.describe(),
            "theta_mode": self.theta_mode.value,
            "alpha": self.alpha.describe(),
            "beta": self.beta.describe(),
            "contraction": self.contraction.coefficient,
            "max_iters": self.max_iters,
            "stop_tol": self.stop_tol,
        }


@dataclass
class ConfigReport:
    warnings: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.warnings


def validate_config(cfg: SolverConfig) -> ConfigReport:
    """
    Check the parameter conditions of the chosen algorithm.

    Range violations raise ConfigError (all of them, in one message);
    conditions that cannot be guaranteed statically come back as warnings.
    """
    errors: list[str] = []
    report = ConfigReport()
    alg = cfg.algorithm

    if not isinstance(cfg.max_iters, int) or cfg.max_iters < 0:
        errors.append(f"max_iters must be a non-negative integer, got {cfg.max_iters!r}")
    if not (math.isfinite(cfg.stop_tol) and cfg.stop_tol >= 0):
        errors.append(f"stop_tol must be finite and >= 0, got {cfg.stop_tol}")

    if not (math.isfinite(cfg.lam) and cfg.lam > 0):
        errors.append(f"lambda must be > 0, got {cfg.lam}")
    elif alg in CONSTANT_LAMBDA and cfg.lam > 1:
        errors.append(f"{alg.value} needs lambda in (0, 1], got {cfg.lam}")
    elif alg not in CONSTANT_LAMBDA and cfg.lam >= 2:
        errors.append(f"{alg.value} needs lambda in (0, 2), got {cfg.lam}")

    if cfg.lam_schedule is not None:
        if alg in CONSTANT_LAMBDA:
            errors.append(f"{alg.value} takes a constant lambda, not a schedule")
        else:
            _, sup, _ = cfg.lam_schedule.bounds()
            if sup >= 2:
                errors.append(f"lambda_n must stay below 2, schedule reaches {sup}")

    if alg in CONSTANT_LAMBDA:
        low, high, attained = cfg.alpha.bounds()
        if not (attained and low > 0) or high >= 1:
            errors.append(
                f"alpha_n must satisfy 0 < a <= alpha_n <= b < 1, got {cfg.alpha.describe()}"
            )

    if alg == Algorithm.NEW:
        low, high, attained = cfg.beta.bounds()
        if high >= 1 or (attained and low <= 0):
            errors.append(f"beta_n must lie in (0, 1), got {cfg.beta.describe()}")
        else:
            if cfg.beta.limit() != 0:
                report.warnings.append(
                    f"beta_n = {cfg.beta.describe()} does not tend to 0 (condition lim beta_n = 0)"
                )
            if not cfg.beta.sum_diverges():
                report.warnings.append(
                    f"beta_n = {cfg.beta.describe()} is summable (condition sum beta_n = inf)"
                )
            report.notes.append(
                "beta_n bounded away from 0 and beta_n -> 0 cannot both hold; "
                "the vanishing, non-summable condition is the one enforced"
            )
        if not (0.0 <= cfg.contraction.coefficient < 1.0):
            errors.append("contraction coefficient must lie in [0, 1)")

    if alg in INERTIAL:
        if cfg.theta_mode == ThetaMode.ADAPTIVE:
            if not cfg.theta_adaptive_c > 0:
                errors.append("adaptive theta needs c > 0")
        elif not cfg.theta.is_eventually_zero():
            report.warnings.append(
                f"theta_n = {cfg.theta.describe()} does not guarantee "
                "sum theta_n ||x_n - x_n-1||_M < inf; use adaptive theta mode to enforce it"
            )

    if errors:
        raise ConfigError("; ".join(errors))

    for w in report.warnings:
        logger.warning("[SolverConfig] %s: %s", alg.value, w)
    for note in report.notes:
        logger.debug("[SolverConfig] %s: %s", alg.value, note)
    return report
