# restoration/core/linear_maps.py
from __future__ import annotations

from abc import ABC, abstractmethod

import numpy as np

from restoration.exceptions import ArgumentError


class LinearMap(ABC):
    """
    Behavioural interface for A: R^dim_in -> R^dim_out and its adjoint.
    Realizations: DenseMap, IdentityMap, imaging.blur.ConvolutionMap.
    """

    dim_in: int
    dim_out: int

    @abstractmethod
    def _apply(self, x: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def _apply_adjoint(self, y: np.ndarray) -> np.ndarray: ...

    def apply(self, x: np.ndarray) -> np.ndarray:
        if x.shape != (self.dim_in,):
            raise ArgumentError(f"apply expects shape ({self.dim_in},), got {x.shape}")
        return self._apply(x)

    def apply_adjoint(self, y: np.ndarray) -> np.ndarray:
        if y.shape != (self.dim_out,):
            raise ArgumentError(f"apply_adjoint expects shape ({self.dim_out},), got {y.shape}")
        return self._apply_adjoint(y)

    def materialize(self) -> np.ndarray:
        """Dense dim_out x dim_in matrix, column by column (tests / small maps only)."""
        cols = np.empty((self.dim_out, self.dim_in))
        e = np.zeros(self.dim_in)
        for j in range(self.dim_in):
            e[j] = 1.0
            cols[:, j] = self._apply(e)
            e[j] = 0.0
        return cols


class DenseMap(LinearMap):
    def __init__(self, matrix, adjoint=None) -> None:
        m = np.array(matrix, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
            raise ArgumentError(f"dense map needs a non-empty 2-D matrix, got shape {m.shape}")
        self.matrix = m
        # an explicit adjoint is only used to exercise adjoint checks
        self.adjoint_matrix = m.T if adjoint is None else np.array(adjoint, dtype=np.float64)
        if self.adjoint_matrix.shape != (m.shape[1], m.shape[0]):
            raise ArgumentError("adjoint matrix shape does not match the transpose")
        self.dim_out, self.dim_in = m.shape

    @classmethod
    def diagonal(cls, entries) -> "DenseMap":
        return cls(np.diag(np.asarray(entries, dtype=np.float64)))

    def _apply(self, x):
        return self.matrix @ x

    def _apply_adjoint(self, y):
        return self.adjoint_matrix @ y

    def materialize(self) -> np.ndarray:
        return self.matrix.copy()


class IdentityMap(LinearMap):
    def __init__(self, dim: int) -> None:
        if dim < 1:
            raise ArgumentError("identity map needs dim >= 1")
        self.dim_in = self.dim_out = int(dim)

    def _apply(self, x):
        return x.copy()

    def _apply_adjoint(self, y):
        return y.copy()
