# restoration/imaging/blur.py
from __future__ import annotations

import numpy as np
from scipy import ndimage

from restoration.core.linear_maps import LinearMap
from restoration.exceptions import ArgumentError

from .image import Kernel


class ConvolutionMap(LinearMap):
    """
    Periodic 2-D convolution on flattened row-major images. The adjoint is
    periodic correlation with the same weights.
    """

    def __init__(self, kernel: Kernel, width: int, height: int) -> None:
        if width < 1 or height < 1:
            raise ArgumentError(f"image size must be positive, got {width}x{height}")
        if kernel.size > min(width, height):
            raise ArgumentError(
                f"kernel size {kernel.size} exceeds the {width}x{height} image"
            )
        self.kernel = kernel
        self.width = int(width)
        self.height = int(height)
        self.dim_in = self.dim_out = self.width * self.height

    def _grid(self, v: np.ndarray) -> np.ndarray:
        return v.reshape(self.height, self.width)

    def _apply(self, x):
        return ndimage.convolve(self._grid(x), self.kernel.weights, mode="wrap").reshape(-1)

    def _apply_adjoint(self, y):
        return ndimage.correlate(self._grid(y), self.kernel.weights, mode="wrap").reshape(-1)

    def __repr__(self) -> str:
        return f"ConvolutionMap(size={self.kernel.size}, {self.width}x{self.height})"


def make_blur_map(kernel: Kernel, width: int, height: int) -> ConvolutionMap:
    return ConvolutionMap(kernel, width, height)
