# restoration/imaging/rng.py
"""
SplitMix64 generator with Box-Muller normals.

The generator is a value: every draw returns the next Rng instead of
mutating shared state. The k-th output only depends on seed + k * GAMMA,
so blocks of draws can be computed with numpy uint64 arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from restoration.exceptions import ArgumentError

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
UNIT = 2.0 ** -53
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Rng:
    state: int

    def __post_init__(self) -> None:
        if not isinstance(self.state, (int, np.integer)) or not 0 <= int(self.state) <= MASK64:
            raise ArgumentError(f"rng state must be a 64-bit unsigned integer, got {self.state!r}")
        object.__setattr__(self, "state", int(self.state))


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


def rng_next_uniform(r: Rng) -> tuple[float, Rng]:
    state = (r.state + GAMMA) & MASK64
    return (_mix(state) >> 11) * UNIT, Rng(state)


def _box_muller(u1: float, u2: float) -> float:
    if u1 < UNIT:
        u1 = UNIT
    return math.sqrt(-2.0 * math.log(u1)) * math.cos(TWO_PI * u2)


def gaussian_sample(r: Rng) -> tuple[float, Rng]:
    u1, r = rng_next_uniform(r)
    u2, r = rng_next_uniform(r)
    return _box_muller(u1, u2), r


def rng_uniform_array(r: Rng, count: int) -> tuple[np.ndarray, Rng]:
    """The next `count` uniforms, bit-identical to `count` rng_next_uniform calls."""
    if count < 0:
        raise ArgumentError(f"count must be >= 0, got {count}")
    steps = np.arange(1, count + 1, dtype=np.uint64)
    # uint64 array arithmetic wraps modulo 2^64
    z = np.uint64(r.state) + steps * np.uint64(GAMMA)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
    z = z ^ (z >> np.uint64(31))
    values = (z >> np.uint64(11)).astype(np.float64) * UNIT
    return values, Rng((r.state + count * GAMMA) & MASK64)


def gaussian_array(r: Rng, count: int) -> tuple[np.ndarray, Rng]:
    """The next `count` normals, bit-identical to `count` gaussian_sample calls."""
    uniforms, r = rng_uniform_array(r, 2 * count)
    pairs = uniforms.reshape(count, 2)
    # scalar libm per element keeps the values identical to gaussian_sample
    values = np.fromiter(
        (_box_muller(u1, u2) for u1, u2 in pairs.tolist()), dtype=np.float64, count=count
    )
    return values, r
