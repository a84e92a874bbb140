# restoration/solvers/driver.py
from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Sequence

import numpy as np

from restoration.core.operators import as_vector, m_norm
from restoration.exceptions import ArgumentError, DivergenceError

from .config import SolverConfig, validate_config
from .diagnostics import fixed_point_residual
from .solver_router import FB_EVALUATIONS, pick_step
from .steps import IterState, resolve_preconditioner
from .terms import Problem

logger = logging.getLogger(__name__)

# callback(n, x_n) -> optional extra columns, e.g. {"snr_db": 41.2}
IterationCallback = Callable[[int, np.ndarray], Mapping[str, float] | None]

LOG_EVERY = 100


@dataclass(frozen=True)
class IterationRecord:
    n: int
    objective: float
    residual_m_norm: float
    step_m_norm: float
    elapsed_s: float
    snr_db: float | None = None


@dataclass
class IterationTrace:
    header: dict[str, Any] = field(default_factory=dict)
    records: list[IterationRecord] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    def at(self, n: int) -> IterationRecord:
        # records are indexed from n = 1 without gaps
        if not 1 <= n <= len(self.records):
            raise ArgumentError(f"no trace record for iteration {n}")
        return self.records[n - 1]

    @property
    def final(self) -> IterationRecord | None:
        return self.records[-1] if self.records else None


@dataclass
class SolverResult:
    x_final: np.ndarray
    trace: IterationTrace

    @property
    def iterations(self) -> int:
        return len(self.trace)


def run_solver(
    problem: Problem,
    cfg: SolverConfig,
    x0,
    x1=None,
    callbacks: Sequence[IterationCallback] = (),
    metadata: Mapping[str, Any] | None = None,
) -> SolverResult:
    """
    Iterate the configured step from (x0, x1) until the relative fixed-point
    residual ||J(x_n) - x_n||_M <= stop_tol (1 + ||x_n||_M) or max_iters.

    stop_tol = 0 disables the residual test (fixed iteration count).
    Raises ConfigError before the first iteration and DivergenceError on a
    non-finite iterate or residual. The residual uses the lambda of iteration n.
    """
    report = validate_config(cfg)
    M = resolve_preconditioner(cfg, problem)
    if M.dim != problem.dim:
        raise ArgumentError(f"preconditioner dim {M.dim} != problem dim {problem.dim}")

    x_start = as_vector(x0, name="x0")
    x_curr = x_start if x1 is None else as_vector(x1, name="x1")
    if x_start.shape[0] != problem.dim or x_curr.shape[0] != problem.dim:
        raise ArgumentError("start points do not match the problem dimension")

    step = pick_step(cfg.algorithm)
    h, g = problem.smooth, problem.prox
    trace = IterationTrace(
        header={
            "config": cfg.echo(),
            "lipschitz": h.lipschitz,
            "preconditioner": "scalar" if np.all(M.diag == M.diag[0]) else "diagonal",
            "preconditioner_scale": float(M.diag[0]),
            "fb_evaluations_per_iteration": FB_EVALUATIONS[cfg.algorithm],
            "warnings": list(report.warnings),
            **dict(metadata or {}),
        }
    )

    logger.info(
        "[Solver] %s: start, dim=%d, max_iters=%d, lambda=%g, L_h=%g",
        cfg.algorithm.value, problem.dim, cfg.max_iters, cfg.lam, h.lipschitz,
    )
    state = IterState(x_start, x_curr)
    started = time.perf_counter()

    for n in range(1, cfg.max_iters + 1):
        x_next = step(state, n, cfg, problem)
        if not np.all(np.isfinite(x_next)):
            logger.error("[Solver] %s: non-finite iterate at n=%d", cfg.algorithm.value, n)
            raise DivergenceError(n)

        residual = fixed_point_residual(x_next, cfg.lam_at(n), M, h, g)
        if not math.isfinite(residual):
            logger.error("[Solver] %s: non-finite residual at n=%d", cfg.algorithm.value, n)
            raise DivergenceError(n, "non-finite residual")
        extras: dict[str, float] = {}
        for cb in callbacks:
            extras.update(cb(n, x_next) or {})

        trace.records.append(
            IterationRecord(
                n=n,
                objective=problem.objective(x_next),
                residual_m_norm=residual,
                step_m_norm=m_norm(x_next - state.x_curr, M),
                elapsed_s=time.perf_counter() - started,
                snr_db=extras.get("snr_db"),
            )
        )
        state = IterState(state.x_curr, x_next)

        if n % LOG_EVERY == 0:
            logger.debug("[Solver] %s: n=%d residual=%.3e", cfg.algorithm.value, n, residual)
        scale = 1.0 + m_norm(x_next, M) if cfg.stop_tol > 0 else math.inf
        if math.isfinite(scale) and residual <= cfg.stop_tol * scale:
            logger.info("[Solver] %s: residual test met at n=%d", cfg.algorithm.value, n)
            break

    final = trace.final
    logger.info(
        "[Solver] %s: done, iterations=%d, residual=%s",
        cfg.algorithm.value,
        len(trace),
        f"{final.residual_m_norm:.3e}" if final else "n/a",
    )
    return SolverResult(x_final=state.x_curr, trace=trace)
