# restoration/imaging/image.py
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from restoration.exceptions import ArgumentError

KERNEL_SUM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Image:
    """
    Grayscale image, row-major. Intensities are nominally in [0, 1] but may
    leave that range during restoration; only save_pgm clamps.
    """

    width: int
    height: int
    pixels: np.ndarray

    def __post_init__(self) -> None:
        if int(self.width) < 1 or int(self.height) < 1:
            raise ArgumentError(f"image size must be positive, got {self.width}x{self.height}")
        px = np.array(self.pixels, dtype=np.float64).reshape(-1)
        if px.size != self.width * self.height:
            raise ArgumentError(
                f"{self.width}x{self.height} image needs {self.width * self.height} pixels, got {px.size}"
            )
        if not np.all(np.isfinite(px)):
            raise ArgumentError("image has non-finite pixels")
        px.setflags(write=False)
        object.__setattr__(self, "width", int(self.width))
        object.__setattr__(self, "height", int(self.height))
        object.__setattr__(self, "pixels", px)

    @classmethod
    def from_array(cls, grid) -> "Image":
        arr = np.asarray(grid, dtype=np.float64)
        if arr.ndim != 2:
            raise ArgumentError(f"expected a 2-D array, got {arr.ndim}-D")
        return cls(arr.shape[1], arr.shape[0], arr)

    @property
    def dim(self) -> int:
        return self.width * self.height

    @property
    def shape(self) -> tuple[int, int]:
        return self.height, self.width

    def as_array(self) -> np.ndarray:
        return self.pixels.reshape(self.shape)

    def with_pixels(self, pixels) -> "Image":
        return Image(self.width, self.height, pixels)


@dataclass(frozen=True, eq=False)
class Kernel:
    size: int
    weights: np.ndarray

    def __post_init__(self) -> None:
        size = int(self.size)
        if size < 1 or size % 2 == 0:
            raise ArgumentError(f"kernel size must be odd and >= 1, got {self.size}")
        w = np.array(self.weights, dtype=np.float64)
        if w.shape != (size, size):
            raise ArgumentError(f"kernel weights must be {size}x{size}, got {w.shape}")
        if not np.all(np.isfinite(w)):
            raise ArgumentError("kernel has non-finite weights")
        total = float(w.sum())
        if abs(total - 1.0) > KERNEL_SUM_TOL:
            raise ArgumentError(f"kernel weights must sum to 1, got {total!r}")
        w.setflags(write=False)
        object.__setattr__(self, "size", size)
        object.__setattr__(self, "weights", w)

    @classmethod
    def normalized(cls, weights) -> "Kernel":
        w = np.asarray(weights, dtype=np.float64)
        total = w.sum()
        if not total > 0:
            raise ArgumentError("kernel weights must have a positive sum")
        return cls(w.shape[0], w / total)

    @classmethod
    def delta(cls) -> "Kernel":
        return cls(1, np.ones((1, 1)))
