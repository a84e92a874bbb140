# restoration/core/operators.py
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from restoration.exceptions import ArgumentError

Vector = np.ndarray  # 1-D float64, finite


def as_vector(values: Iterable[float] | np.ndarray, *, name: str = "x") -> Vector:
    """
    Coerce to a read-only 1-D float64 array and check the Vector invariants
    (dimension >= 1, every coordinate finite).
    """
    arr = np.array(values, dtype=np.float64).reshape(-1)
    if arr.size < 1:
        raise ArgumentError(f"{name}: vector must have dimension >= 1")
    if not np.all(np.isfinite(arr)):
        raise ArgumentError(f"{name}: vector has non-finite coordinates")
    arr.setflags(write=False)
    return arr


def check_same_dim(*vectors: np.ndarray) -> int:
    dims = {v.shape[0] for v in vectors}
    if len(dims) != 1:
        raise ArgumentError(f"dimension mismatch: {sorted(dims)}")
    return dims.pop()


@dataclass(frozen=True, eq=False)
class Preconditioner:
    """
    Diagonal positive-definite M. Self-adjointness is structural, so the
    M-inner product <x, My> is symmetric by construction.
    """

    diag: np.ndarray

    def __post_init__(self) -> None:
        d = np.array(self.diag, dtype=np.float64).reshape(-1)
        if d.size < 1:
            raise ArgumentError("preconditioner must have dimension >= 1")
        if not np.all(np.isfinite(d)) or np.any(d <= 0.0):
            raise ArgumentError("preconditioner entries must be finite and strictly positive")
        d.setflags(write=False)
        object.__setattr__(self, "diag", d)

    @classmethod
    def scalar(cls, value: float, dim: int) -> "Preconditioner":
        return cls(np.full(dim, float(value)))

    @classmethod
    def identity(cls, dim: int) -> "Preconditioner":
        return cls.scalar(1.0, dim)

    @property
    def dim(self) -> int:
        return int(self.diag.shape[0])

    @property
    def is_identity(self) -> bool:
        return bool(np.all(self.diag == 1.0))

    def apply(self, x: np.ndarray) -> np.ndarray:
        check_same_dim(x, self.diag)
        return self.diag * x

    def apply_inverse(self, x: np.ndarray) -> np.ndarray:
        check_same_dim(x, self.diag)
        return x / self.diag


def m_inner(x: np.ndarray, y: np.ndarray, M: Preconditioner) -> float:
    """Sum_i x_i * M_ii * y_i."""
    check_same_dim(x, y, M.diag)
    return float(np.dot(x * M.diag, y))


def m_norm(x: np.ndarray, M: Preconditioner) -> float:
    # clamp rounding noise below zero before the sqrt
    return float(np.sqrt(max(m_inner(x, x, M), 0.0)))
