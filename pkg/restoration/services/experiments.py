# restoration/services/experiments.py
"""
Bench pipelines behind the management commands: degrade, restore, compare
and the lasso demo. Commands parse options; everything else lives here.
"""
from __future__ import annotations

import json
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from restoration.atomic import atomic_write_text
from restoration.core.linear_maps import DenseMap
from restoration.core.spectral import estimate_operator_norm
from restoration.exceptions import ArgumentError, ConfigError
from restoration.imaging import (
    Image,
    Kernel,
    add_noise,
    load_pgm,
    make_blur_map,
    save_pgm,
    snr_db,
)
from restoration.imaging.rng import Rng, gaussian_array, rng_uniform_array
from restoration.solvers import (
    Algorithm,
    Contraction,
    Problem,
    ProxTerm,
    ScheduleRole,
    SmoothTerm,
    SolverConfig,
    SolverResult,
    fixed_point_residual,
    lasso_kkt_residual,
    parse_schedule,
    run_solver,
    solve_reference,
    validate_config,
)
from restoration.solvers.steps import resolve_preconditioner

from .experiment_config import ExperimentConfig
from .trace_csv import TraceRow, write_snr_table, write_trace_csv

logger = logging.getLogger(__name__)

SIDECAR_SUFFIX = ".json"
# sidecar entries that feed back into restore/compare settings
SIDECAR_SETTINGS = ("kernel", "noise_sigma", "seed", "lipschitz")


def sidecar_path(image_path: str | os.PathLike) -> Path:
    p = Path(image_path)
    return p.with_name(p.name + SIDECAR_SUFFIX)


def read_sidecar(image_path: str | os.PathLike) -> dict[str, Any]:
    """Degradation metadata written next to a degraded image; {} when absent."""
    path = sidecar_path(image_path)
    if not path.exists():
        return {}
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid sidecar JSON ({exc})") from None
    return {k: data[k] for k in SIDECAR_SETTINGS if data.get(k) is not None}


def _require_path(value: Path | None, flag: str, command: str) -> Path:
    if value is None:
        raise ArgumentError(f"{command} needs {flag}")
    return value


def build_deblur_problem(kernel: Kernel, observed: Image, rho: float, lipschitz: float | None = None) -> Problem:
    """h(x) = 1/2 ||Kx - b||^2 with periodic blur K, g = rho ||x||_1."""
    A = make_blur_map(kernel, observed.width, observed.height)
    if lipschitz is None:
        smooth = SmoothTerm.from_map(A, observed.pixels)
    else:
        smooth = SmoothTerm(A, observed.pixels, lipschitz)
    return Problem(smooth, ProxTerm(rho))


# degrade --------------------------------------------------------------


@dataclass
class DegradeOutcome:
    image: Image
    output: Path
    sidecar: Path
    metadata: dict[str, Any]


def run_degrade(cfg: ExperimentConfig) -> DegradeOutcome:
    source = _require_path(cfg.input, "--input", "degrade")
    output = _require_path(cfg.output, "--output", "degrade")
    kernel = cfg.kernel_obj()
    noise = cfg.noise_spec()

    original = load_pgm(source)
    A = make_blur_map(kernel, original.width, original.height)
    blurred = original.with_pixels(A.apply(original.pixels))
    degraded = add_noise(blurred, noise)
    lipschitz = estimate_operator_norm(A) ** 2

    metadata = {
        "input": str(source),
        "width": original.width,
        "height": original.height,
        "kernel": cfg.kernel,
        "noise_sigma": noise.sigma,
        "seed": int(noise.seed),
        "lipschitz": lipschitz,
    }
    save_pgm(degraded, output, binary=not cfg.plain)
    side = sidecar_path(output)
    atomic_write_text(side, json.dumps(metadata, indent=2, sort_keys=True) + "\n")
    logger.info(
        "[Bench] degrade: %s -> %s (kernel=%s, sigma=%g, seed=%d, L_h=%.6g)",
        source, output, cfg.kernel, noise.sigma, noise.seed, lipschitz,
    )
    return DegradeOutcome(degraded, output, side, metadata)


# restore / compare ----------------------------------------------------


@dataclass
class AlgorithmRun:
    algorithm: Algorithm
    result: SolverResult
    rows: list[TraceRow]

    def snr_at(self, iteration: int) -> float | None:
        for row in self.rows:
            if row.iter == iteration:
                return row.snr_db
        return None


def _load_pair(cfg: ExperimentConfig, command: str) -> tuple[Image, Image]:
    degraded_path = _require_path(cfg.input, "--input", command)
    original_path = _require_path(cfg.original, "--original (pristine image for the SNR column)", command)
    degraded = load_pgm(degraded_path)
    original = load_pgm(original_path)
    if degraded.shape != original.shape:
        raise ArgumentError(
            f"--input is {degraded.width}x{degraded.height} but --original is "
            f"{original.width}x{original.height}"
        )
    return degraded, original


def _run_algorithm(
    problem: Problem, solver_cfg: SolverConfig, start: np.ndarray, original: Image
) -> AlgorithmRun:
    """Run from x0 = x1 = start; the trace gets an iteration-0 row for the start."""
    def snr_callback(n: int, x: np.ndarray) -> dict[str, float]:
        return {"snr_db": snr_db(original.pixels, x)}

    result = run_solver(
        problem,
        solver_cfg,
        x0=start,
        x1=start,
        callbacks=[snr_callback],
        metadata={"start": "degraded"},
    )
    M = resolve_preconditioner(solver_cfg, problem)
    rows = [
        TraceRow(
            0,
            snr_db(original.pixels, start),
            problem.objective(start),
            fixed_point_residual(start, solver_cfg.lam_at(1), M, problem.smooth, problem.prox),
            0.0,
        )
    ]
    rows.extend(
        TraceRow(r.n, r.snr_db, r.objective, r.residual_m_norm, r.elapsed_s)
        for r in result.trace.records
    )
    return AlgorithmRun(solver_cfg.algorithm, result, rows)


@dataclass
class RestoreOutcome:
    run: AlgorithmRun
    restored: Image
    lipschitz: float
    output: Path | None
    trace: Path | None


def run_restore(cfg: ExperimentConfig) -> RestoreOutcome:
    algorithm = cfg.algorithms[0]
    if len(cfg.algorithms) > 1:
        raise ArgumentError("restore runs one algorithm; use compare for several")
    # fail on parameters before reading images or estimating ||A||
    solver_cfg = cfg.solver_config(algorithm)
    validate_config(solver_cfg)
    kernel = cfg.kernel_obj()

    degraded, original = _load_pair(cfg, "restore")
    problem = build_deblur_problem(kernel, degraded, cfg.rho, cfg.lipschitz)
    run = _run_algorithm(problem, solver_cfg, degraded.pixels, original)
    restored = degraded.with_pixels(run.result.x_final)

    if cfg.output is not None:
        save_pgm(restored, cfg.output, binary=not cfg.plain)
    if cfg.trace is not None:
        write_trace_csv(run.rows, cfg.trace)
    final = run.rows[-1]
    logger.info(
        "[Bench] restore: %s, %d iterations, SNR %s dB",
        algorithm.value, final.iter, f"{final.snr_db:.6f}",
    )
    return RestoreOutcome(run, restored, problem.smooth.lipschitz, cfg.output, cfg.trace)


@dataclass
class CompareOutcome:
    runs: list[AlgorithmRun]
    checkpoints: tuple[int, ...]
    table: dict[str, list[float | None]] = field(default_factory=dict)
    lipschitz: float = 0.0


def run_compare(cfg: ExperimentConfig) -> CompareOutcome:
    if len(cfg.algorithms) < 2:
        raise ArgumentError(f"compare needs at least 2 algorithms, got {len(cfg.algorithms)}")
    if len(set(cfg.algorithms)) != len(cfg.algorithms):
        raise ArgumentError("compare got the same algorithm twice")
    table_path = _require_path(cfg.table, "--table", "compare")
    if not cfg.checkpoints:
        raise ConfigError("compare needs at least one checkpoint")
    solver_cfgs = [cfg.solver_config(a) for a in cfg.algorithms]
    for sc in solver_cfgs:
        validate_config(sc)
    kernel = cfg.kernel_obj()

    degraded, original = _load_pair(cfg, "compare")
    # one problem, one noise realization, one start for every algorithm
    problem = build_deblur_problem(kernel, degraded, cfg.rho, cfg.lipschitz)
    start = degraded.pixels

    logger.info(
        "[Bench] compare: %s on %dx%d, %d iterations, workers=%d",
        ",".join(a.value for a in cfg.algorithms), degraded.width, degraded.height, cfg.iters, cfg.workers,
    )
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        # map() yields in submission order whatever the completion order
        runs = list(pool.map(lambda sc: _run_algorithm(problem, sc, start, original), solver_cfgs))

    table = {run.algorithm.value: [run.snr_at(c) for c in cfg.checkpoints] for run in runs}
    write_snr_table(cfg.checkpoints, table, table_path)
    # traces land next to the table unless --trace-dir says otherwise
    trace_dir = Path(cfg.trace_dir) if cfg.trace_dir is not None else table_path.parent
    for run in runs:
        write_trace_csv(run.rows, trace_dir / f"{run.algorithm.value}.csv")
    return CompareOutcome(runs, cfg.checkpoints, table, problem.smooth.lipschitz)


# lasso demo -----------------------------------------------------------

LASSO_ALGORITHMS = (
    Algorithm.FBS,
    Algorithm.MOUDAFI_OLINY,
    Algorithm.LORENZ_POCK,
    Algorithm.APFBNSM,
    Algorithm.NEW,
)


@dataclass(frozen=True)
class LassoDemoConfig:
    dimension: int = 50
    sparsity: int = 5
    seed: int = 42
    algorithms: tuple[Algorithm, ...] = LASSO_ALGORITHMS
    iters: int = 10_000
    rho: float = 0.05
    noise_sigma: float = 1e-3
    kkt_target: float = 1e-3
    reference_iters: int = 100_000
    lam: float = 0.99
    theta: str = "const:0.1"
    alpha: str = "const:0.5"
    beta: str = "harmonic:0.1"
    contraction: float = 0.99
    stop_tol: float = 1e-12

    def __post_init__(self) -> None:
        if self.dimension < 2:
            raise ArgumentError(f"lasso demo needs dimension >= 2, got {self.dimension}")
        if not 0 <= self.sparsity <= self.dimension:
            raise ArgumentError(f"sparsity must lie in [0, {self.dimension}], got {self.sparsity}")
        if not self.algorithms:
            raise ArgumentError("at least one algorithm is required")
        if not (math.isfinite(self.rho) and self.rho >= 0):
            raise ArgumentError(f"rho must be >= 0, got {self.rho}")
        if not (math.isfinite(self.noise_sigma) and self.noise_sigma >= 0):
            raise ArgumentError(f"noise sigma must be >= 0, got {self.noise_sigma}")
        if self.iters < 0 or self.reference_iters < 1:
            raise ArgumentError("iteration counts must be non-negative (reference >= 1)")

    @property
    def rows(self) -> int:
        return math.ceil(0.8 * self.dimension)

    def solver_config(self, algorithm: Algorithm) -> SolverConfig:
        return SolverConfig(
            algorithm=algorithm,
            lam=self.lam,
            theta=parse_schedule(self.theta, ScheduleRole.THETA),
            alpha=parse_schedule(self.alpha, ScheduleRole.ALPHA),
            beta=parse_schedule(self.beta, ScheduleRole.BETA),
            contraction=Contraction(self.contraction),
            max_iters=self.iters,
            stop_tol=self.stop_tol,
        )


@dataclass
class LassoInstance:
    matrix: np.ndarray
    truth: np.ndarray
    observation: np.ndarray


def make_lasso_instance(cfg: LassoDemoConfig) -> LassoInstance:
    """
    Seeded instance: A is m x d (m = ceil(0.8 d)) with N(0, 1/m) entries,
    a `sparsity`-sparse ground truth, b = A x* + noise_sigma * g. Draws are
    taken from one SplitMix64 stream in that order.
    """
    d, m = cfg.dimension, cfg.rows
    rng = Rng(cfg.seed)
    entries, rng = gaussian_array(rng, m * d)
    A = entries.reshape(m, d) / math.sqrt(m)

    order, rng = rng_uniform_array(rng, d)
    support = np.sort(np.argsort(order, kind="stable")[: cfg.sparsity])
    values, rng = gaussian_array(rng, cfg.sparsity)
    truth = np.zeros(d)
    truth[support] = values

    b = A @ truth
    if cfg.noise_sigma > 0:
        noise, rng = gaussian_array(rng, m)
        b = b + cfg.noise_sigma * noise
    return LassoInstance(A, truth, b)


@dataclass(frozen=True)
class LassoAlgorithmReport:
    algorithm: Algorithm
    iterations: int
    kkt_residual: float
    fixed_point_residual: float
    distance_to_reference: float
    passed: bool


@dataclass
class LassoDemoReport:
    reference_iterations: int
    reference_kkt: float
    lipschitz: float
    entries: list[LassoAlgorithmReport] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(e.passed for e in self.entries)


def run_lasso_demo(cfg: LassoDemoConfig) -> LassoDemoReport:
    solver_cfgs = [cfg.solver_config(a) for a in cfg.algorithms]
    for sc in solver_cfgs:
        validate_config(sc)

    instance = make_lasso_instance(cfg)
    problem = Problem(SmoothTerm.from_map(DenseMap(instance.matrix), instance.observation), ProxTerm(cfg.rho))
    h = problem.smooth
    reference, ref_iters = solve_reference(problem, iters=cfg.reference_iters)
    report = LassoDemoReport(ref_iters, lasso_kkt_residual(reference, h, cfg.rho), h.lipschitz)
    logger.info(
        "[Bench] lasso demo: d=%d m=%d sparsity=%d rho=%g, reference after %d iterations (kkt=%.3e)",
        cfg.dimension, cfg.rows, cfg.sparsity, cfg.rho, ref_iters, report.reference_kkt,
    )

    zero = np.zeros(cfg.dimension)
    for sc in solver_cfgs:
        result = run_solver(problem, sc, x0=zero, x1=zero, metadata={"demo": "lasso"})
        x = result.x_final
        M = resolve_preconditioner(sc, problem)
        kkt = lasso_kkt_residual(x, h, cfg.rho)
        entry = LassoAlgorithmReport(
            algorithm=sc.algorithm,
            iterations=result.iterations,
            kkt_residual=kkt,
            fixed_point_residual=fixed_point_residual(x, sc.lam_at(max(result.iterations, 1)), M, h, problem.prox),
            distance_to_reference=float(np.linalg.norm(x - reference)),
            passed=kkt <= cfg.kkt_target,
        )
        report.entries.append(entry)
        log = logger.info if entry.passed else logger.warning
        log(
            "[Bench] lasso demo: %s iterations=%d kkt=%.3e fpr=%.3e dist=%.3e",
            sc.algorithm.value, entry.iterations, entry.kkt_residual,
            entry.fixed_point_residual, entry.distance_to_reference,
        )
    return report
