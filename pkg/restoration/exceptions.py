# restoration/exceptions.py
from __future__ import annotations


class RestorationError(Exception):
    """Base class for every error raised by the restoration package."""


class ArgumentError(RestorationError, ValueError):
    """Bad argument: wrong dimension, out-of-range scalar, malformed spec."""


class ConfigError(RestorationError, ValueError):
    """Solver or experiment configuration violates a hard constraint."""


class NumericalError(RestorationError, ArithmeticError):
    """A numerical routine could not produce a meaningful value."""


class DivergenceError(NumericalError):
    def __init__(self, iteration: int, detail: str = "non-finite iterate") -> None:
        self.iteration = iteration
        super().__init__(f"{detail} at iteration {iteration}")


class PgmFormatError(ArgumentError):
    """Malformed PGM header or payload; `offset` is the byte position."""

    def __init__(self, message: str, offset: int) -> None:
        self.offset = offset
        super().__init__(f"{message} (byte offset {offset})")


class UnsupportedPgmError(PgmFormatError):
    pass
