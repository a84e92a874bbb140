# restoration/solvers/terms.py
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from restoration.core.linear_maps import LinearMap
from restoration.core.operators import as_vector
from restoration.core.spectral import estimate_operator_norm
from restoration.exceptions import ArgumentError, ConfigError


@dataclass(frozen=True, eq=False)
class SmoothTerm:
    """h(x) = 1/2 ||Ax - b||^2 with L_h-Lipschitz gradient A^T(Ax - b)."""

    observation_map: LinearMap
    observation: np.ndarray
    lipschitz: float

    def __post_init__(self) -> None:
        b = as_vector(self.observation, name="observation")
        if b.shape[0] != self.observation_map.dim_out:
            raise ArgumentError(
                f"observation has dim {b.shape[0]}, map outputs {self.observation_map.dim_out}"
            )
        if not (math.isfinite(self.lipschitz) and self.lipschitz > 0):
            raise ArgumentError("lipschitz must be finite and > 0")
        object.__setattr__(self, "observation", b)

    @classmethod
    def from_map(cls, A: LinearMap, b, **power_kwargs) -> "SmoothTerm":
        """Build h with L_h = ||A||^2 from the power-iteration estimate."""
        norm = estimate_operator_norm(A, **power_kwargs)
        if norm <= 0.0:
            # A = 0: any positive constant is a valid Lipschitz bound
            norm = 1.0
        return cls(A, b, norm * norm)

    @property
    def dim(self) -> int:
        return self.observation_map.dim_in

    def residual(self, x: np.ndarray) -> np.ndarray:
        return self.observation_map.apply(x) - self.observation

    def value(self, x: np.ndarray) -> float:
        r = self.residual(x)
        return 0.5 * float(np.dot(r, r))

    def check_lipschitz(self, tolerance: float = 1e-6, **power_kwargs) -> float:
        """Raise ConfigError unless lipschitz >= ||A||^2 - tolerance; returns ||A||^2."""
        squared = estimate_operator_norm(self.observation_map, **power_kwargs) ** 2
        if self.lipschitz < squared - tolerance:
            raise ConfigError(
                f"lipschitz={self.lipschitz:.6g} is below ||A||^2={squared:.6g}"
            )
        return squared


@dataclass(frozen=True)
class ProxTerm:
    """g(x) = weight * ||x||_1; weight 0 makes the resolvent the identity."""

    weight: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.weight) or self.weight < 0:
            raise ArgumentError("prox weight must be finite and >= 0")

    def value(self, x: np.ndarray) -> float:
        return self.weight * float(np.sum(np.abs(x)))


@dataclass(frozen=True, eq=False)
class Problem:
    smooth: SmoothTerm
    prox: ProxTerm

    @property
    def dim(self) -> int:
        return self.smooth.dim

    def objective(self, x: np.ndarray) -> float:
        return self.smooth.value(x) + self.prox.value(x)


@dataclass(frozen=True, eq=False)
class Contraction:
    """
    f(x) = k x + (1 - k) anchor. Affine, so ||f(x) - f(y)||_M = k ||x - y||_M
    for every diagonal M. anchor=None means the origin (f(x) = k x).
    """

    coefficient: float
    anchor: np.ndarray | None = None

    def __post_init__(self) -> None:
        if not (0.0 <= self.coefficient < 1.0):
            raise ArgumentError("contraction coefficient must lie in [0, 1)")
        if self.anchor is not None:
            object.__setattr__(self, "anchor", as_vector(self.anchor, name="anchor"))

    def __call__(self, x: np.ndarray) -> np.ndarray:
        if self.anchor is None:
            return self.coefficient * x
        if self.anchor.shape != x.shape:
            raise ArgumentError("contraction anchor dimension mismatch")
        return self.coefficient * x + (1.0 - self.coefficient) * self.anchor
