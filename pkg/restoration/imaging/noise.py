# restoration/imaging/noise.py
from __future__ import annotations

import math
from dataclasses import dataclass

from restoration.exceptions import ArgumentError

from .image import Image
from .rng import MASK64, Rng, gaussian_array


@dataclass(frozen=True)
class NoiseSpec:
    sigma: float
    seed: int

    def __post_init__(self) -> None:
        if not (math.isfinite(self.sigma) and self.sigma >= 0):
            raise ArgumentError(f"noise sigma must be finite and >= 0, got {self.sigma}")
        if not 0 <= int(self.seed) <= MASK64:
            raise ArgumentError(f"noise seed must be a 64-bit unsigned integer, got {self.seed}")


def add_noise(img: Image, spec: NoiseSpec) -> Image:
    """pixel_i + sigma * g_i, g_i the i-th normal of Rng(seed), row-major, no clamping."""
    if spec.sigma == 0.0:
        return img.with_pixels(img.pixels.copy())
    g, _ = gaussian_array(Rng(int(spec.seed)), img.dim)
    return img.with_pixels(img.pixels + spec.sigma * g)
