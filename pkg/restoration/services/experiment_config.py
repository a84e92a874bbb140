# restoration/services/experiment_config.py
"""
Experiment settings shared by the bench commands.

Sources, lowest to highest priority: library defaults, --preset, the
degrade sidecar (restore only), the --config key = value file, explicit
command-line flags.
"""
from __future__ import annotations

import logging
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Mapping

from restoration import conf
from restoration.exceptions import ArgumentError, ConfigError
from restoration.imaging import Kernel, NoiseSpec, parse_kernel_spec
from restoration.imaging.rng import MASK64
from restoration.solvers import (
    Algorithm,
    Contraction,
    ScheduleRole,
    SolverConfig,
    ThetaMode,
    parse_algorithm,
    parse_schedule,
)
from restoration.solvers.presets import get_preset

logger = logging.getLogger(__name__)

DEFAULT_COMPARE_ALGORITHMS = (Algorithm.LORENZ_POCK, Algorithm.APFBNSM, Algorithm.NEW)

# config-file / flag spelling -> ExperimentConfig field
_ALIASES = {
    "lambda": "lam",
    "algorithm": "algorithms",
}

_PATH_FIELDS = ("input", "original", "output", "trace", "table", "trace_dir")
_FLOAT_FIELDS = ("noise_sigma", "rho", "lam", "contraction", "stop_tol", "theta_adaptive_c")
_INT_FIELDS = ("seed", "iters", "workers")
_BOOL_FIELDS = ("plain", "record")
_OPTIONAL_FLOAT_FIELDS = ("lipschitz",)


def normalize_key(key: str) -> str:
    k = key.strip().lower().replace("-", "_")
    return _ALIASES.get(k, k)


@dataclass(frozen=True)
class ExperimentConfig:
    input: Path | None = None
    original: Path | None = None
    output: Path | None = None
    trace: Path | None = None
    table: Path | None = None
    trace_dir: Path | None = None
    kernel: str = "gaussian:9,4"
    noise_sigma: float = field(default_factory=lambda: float(conf.get("DEFAULT_NOISE_SIGMA")))
    seed: int = 42
    rho: float = 1e-4
    lam: float = 0.99
    theta: str = "const:0.1"
    theta_mode: str = "constant"
    theta_adaptive_c: float = 1.0
    alpha: str = "const:0.5"
    beta: str = "harmonic:0.1"
    contraction: float = 0.99
    algorithms: tuple[Algorithm, ...] = (Algorithm.NEW,)
    iters: int = 1000
    checkpoints: tuple[int, ...] = (1, 5, 10, 25, 50, 100, 250, 500, 1000)
    # 0 runs exactly `iters` iterations so every checkpoint gets a row
    stop_tol: float = 0.0
    workers: int = field(default_factory=lambda: int(conf.get("COMPARE_WORKERS")))
    plain: bool = False
    record: bool = False
    preset: str | None = None
    lipschitz: float | None = None

    def __post_init__(self) -> None:
        problems = []
        if not self.algorithms:
            problems.append("at least one algorithm is required")
        if any(b <= a for a, b in zip(self.checkpoints, self.checkpoints[1:])):
            problems.append(f"checkpoints must be strictly increasing, got {list(self.checkpoints)}")
        if any(c < 1 for c in self.checkpoints):
            problems.append("checkpoints must be >= 1")
        if self.iters < 0:
            problems.append(f"iters must be >= 0, got {self.iters}")
        if self.checkpoints and self.checkpoints[-1] > self.iters:
            problems.append(f"checkpoint {self.checkpoints[-1]} is beyond iters={self.iters}")
        if not 0 <= self.seed <= MASK64:
            problems.append(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.workers < 1:
            problems.append(f"workers must be >= 1, got {self.workers}")
        if self.lipschitz is not None and not self.lipschitz > 0:
            problems.append(f"lipschitz must be > 0, got {self.lipschitz}")
        if problems:
            raise ConfigError("; ".join(problems))

    # derived objects ----------------------------------------------------

    def kernel_obj(self) -> Kernel:
        return parse_kernel_spec(self.kernel)

    def noise_spec(self) -> NoiseSpec:
        return NoiseSpec(self.noise_sigma, self.seed)

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
            theta_mode=ThetaMode(self.theta_mode),
            theta_adaptive_c=self.theta_adaptive_c,
        )

    def echo(self) -> dict[str, Any]:
        data = asdict(self)
        for key in _PATH_FIELDS:
            data[key] = str(data[key]) if data[key] is not None else None
        data["algorithms"] = [a.value for a in self.algorithms]
        data["checkpoints"] = list(self.checkpoints)
        return data


# parsing --------------------------------------------------------------


def read_config_file(path: str | os.PathLike) -> dict[str, str]:
    """Plain `key = value` lines; `#` starts a comment, blank lines are skipped."""
    values: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            key, sep, value = text.partition("=")
            if not sep or not key.strip():
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got '{line.strip()}'")
            values[normalize_key(key)] = value.strip()
    logger.debug("[Bench] read %d settings from %s", len(values), path)
    return values


def parse_checkpoints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(p) for p in str(text).split(",") if p.strip())
    except ValueError:
        raise ArgumentError(f"checkpoints must be comma-separated integers, got '{text}'") from None


def parse_algorithms(text) -> tuple[Algorithm, ...]:
    if isinstance(text, (list, tuple)):
        return tuple(parse_algorithm(str(a)) for a in text)
    return tuple(parse_algorithm(a) for a in str(text).split(",") if a.strip())


def _parse_bool(value: Any, key: str) -> bool:
    if isinstance(value, bool):
        return value
    raw = str(value).strip().lower()
    if raw in ("1", "true", "yes", "on"):
        return True
    if raw in ("0", "false", "no", "off"):
        return False
    raise ArgumentError(f"'{key}' expects a boolean, got '{value}'")


def _coerce(key: str, value: Any) -> Any:
    try:
        if key in _PATH_FIELDS:
            return Path(value)
        if key in _FLOAT_FIELDS or key in _OPTIONAL_FLOAT_FIELDS:
            return float(value)
        if key in _INT_FIELDS:
            return int(value)
    except (TypeError, ValueError):
        raise ArgumentError(f"bad value for '{key}': '{value}'") from None
    if key in _BOOL_FIELDS:
        return _parse_bool(value, key)
    if key == "algorithms":
        return parse_algorithms(value)
    if key == "checkpoints":
        return parse_checkpoints(value)
    if key in ("kernel", "theta", "theta_mode", "alpha", "beta", "preset"):
        return str(value).strip()
    raise ConfigError(f"unknown setting '{key}'")


def _preset_values(name: str | None) -> dict[str, Any]:
    preset = get_preset(name)
    if preset is None:
        return {}
    if preset.note:
        logger.info("[Bench] preset %s: %s", name, preset.note)
    return {
        "alpha": preset.alpha,
        "theta": preset.theta,
        "beta": preset.beta,
        "lam": preset.lam,
        "contraction": preset.contraction,
        "rho": preset.rho,
        "kernel": preset.kernel,
    }


def resolve_experiment_config(
    flags: Mapping[str, Any],
    *,
    config_path: str | os.PathLike | None = None,
    sidecar: Mapping[str, Any] | None = None,
    base: Mapping[str, Any] | None = None,
) -> ExperimentConfig:
    """
    Merge every settings source into one validated ExperimentConfig.

    `flags` holds only the options the user actually gave (None values are
    ignored). `base` carries per-command defaults such as the algorithm list.
    """
    explicit: dict[str, Any] = {}
    if config_path is not None:
        explicit.update(read_config_file(config_path))
    explicit.update({normalize_key(k): v for k, v in flags.items() if v is not None})

    layers: list[Mapping[str, Any]] = [
        {normalize_key(k): v for k, v in (base or {}).items()},
        _preset_values(explicit.get("preset")),
        {normalize_key(k): v for k, v in (sidecar or {}).items()},
        explicit,
    ]
    merged: dict[str, Any] = {}
    for layer in layers:
        merged.update(layer)

    values = {key: _coerce(key, value) for key, value in merged.items()}
    if values.get("preset"):
        values["preset"] = values["preset"].lower()

    # iters defaults to the last checkpoint; default checkpoints are cut at iters
    defaults = tuple(conf.get("DEFAULT_CHECKPOINTS"))
    checkpoints = values.get("checkpoints")
    if "iters" not in values:
        values["iters"] = (checkpoints or defaults)[-1] if (checkpoints or defaults) else 0
    if checkpoints is None:
        values["checkpoints"] = tuple(c for c in defaults if c <= values["iters"])

    cfg = ExperimentConfig(**values)
    logger.debug("[Bench] resolved config %s", cfg.echo())
    return cfg
