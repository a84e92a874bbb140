# restoration/imaging/kernels.py
from __future__ import annotations

import math

import numpy as np

from restoration.exceptions import ArgumentError

from .image import Kernel


def gaussian_kernel(size: int, sigma: float) -> Kernel:
    """w_ij proportional to exp(-((i-c)^2 + (j-c)^2) / (2 sigma^2)), c = (size-1)/2."""
    if int(size) != size or size < 1 or size % 2 == 0:
        raise ArgumentError(f"gaussian kernel size must be odd and >= 1, got {size}")
    if not (math.isfinite(sigma) and sigma > 0):
        raise ArgumentError(f"gaussian kernel sigma must be > 0, got {sigma}")
    c = (size - 1) / 2.0
    i, j = np.mgrid[0:size, 0:size]
    w = np.exp(-((i - c) ** 2 + (j - c) ** 2) / (2.0 * sigma * sigma))
    return Kernel(int(size), w / w.sum())


def _bresenham(x0: int, y0: int, x1: int, y1: int) -> list[tuple[int, int]]:
    cells = []
    dx, dy = abs(x1 - x0), -abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = dx + dy
    x, y = x0, y0
    while True:
        cells.append((x, y))
        if x == x1 and y == y1:
            return cells
        e2 = 2 * err
        if e2 >= dy:
            err += dy
            x += sx
        if e2 <= dx:
            err += dx
            y += sy


def motion_kernel(length: int, angle_degrees: float) -> Kernel:
    """
    Segment of `length` pixels through the center at `angle_degrees`
    (counter-clockwise from the +x axis, rows grow downwards), rasterized
    with Bresenham stepping between the rounded endpoints. Each endpoint is
    rounded on its own, so an even length still covers `length` cells along
    an axis. The kernel is the smallest odd square holding the segment.
    """
    if int(length) != length or length < 1:
        raise ArgumentError(f"motion kernel length must be an integer >= 1, got {length}")
    if not math.isfinite(angle_degrees):
        raise ArgumentError(f"motion kernel angle must be finite, got {angle_degrees}")
    half = (int(length) - 1) / 2.0
    theta = math.radians(angle_degrees)
    ex = math.floor(half * math.cos(theta) + 0.5)
    ey = math.floor(half * math.sin(theta) + 0.5)
    sx = math.floor(-half * math.cos(theta) + 0.5)
    sy = math.floor(-half * math.sin(theta) + 0.5)
    radius = max(abs(ex), abs(ey), abs(sx), abs(sy))
    size = 2 * radius + 1

    w = np.zeros((size, size))
    for x, y in _bresenham(sx, sy, ex, ey):
        w[radius - y, radius + x] = 1.0
    return Kernel(size, w / w.sum())


def _int_param(text: str, spec: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ArgumentError(f"kernel spec '{spec}': '{text}' is not an integer") from None


def _float_param(text: str, spec: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ArgumentError(f"kernel spec '{spec}': '{text}' is not a number") from None


def parse_kernel_spec(spec: str) -> Kernel:
    """'gaussian:size,sigma', 'motion:length,angle' or 'delta'."""
    raw = (spec or "").strip().lower()
    if raw in ("delta", "identity"):
        return Kernel.delta()
    kind, _, tail = raw.partition(":")
    parts = [p.strip() for p in tail.split(",")] if tail else []
    if kind == "gaussian" and len(parts) == 2:
        return gaussian_kernel(_int_param(parts[0], spec), _float_param(parts[1], spec))
    if kind == "motion" and len(parts) == 2:
        return motion_kernel(_int_param(parts[0], spec), _float_param(parts[1], spec))
    raise ArgumentError(
        f"bad kernel spec '{spec}'. Expected gaussian:size,sigma | motion:length,angle | delta"
    )
