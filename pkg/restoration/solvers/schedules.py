# restoration/solvers/schedules.py
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from restoration.exceptions import ArgumentError


class ScheduleKind(str, Enum):
    CONSTANT = "constant"
    HARMONIC = "harmonic"  # c / n
    SCALED_HARMONIC = "scaled-harmonic"  # c / (n + s)
    CUSTOM_LIST = "custom-list"  # clamps to its last value


class ScheduleRole(str, Enum):
    THETA = "theta"
    ALPHA = "alpha"
    BETA = "beta"
    LAMBDA = "lambda"


# role -> (low, high, low_open, high_open)
ROLE_RANGES: dict[ScheduleRole, tuple[float, float, bool, bool]] = {
    ScheduleRole.THETA: (0.0, 1.0, False, True),
    ScheduleRole.ALPHA: (0.0, 1.0, False, False),
    ScheduleRole.BETA: (0.0, 1.0, False, False),
    ScheduleRole.LAMBDA: (0.0, math.inf, True, True),
}

_KIND_ALIASES = {
    "const": ScheduleKind.CONSTANT,
    "constant": ScheduleKind.CONSTANT,
    "harmonic": ScheduleKind.HARMONIC,
    "scaled-harmonic": ScheduleKind.SCALED_HARMONIC,
    "list": ScheduleKind.CUSTOM_LIST,
    "custom-list": ScheduleKind.CUSTOM_LIST,
}


@dataclass(frozen=True)
class Schedule:
    """
    A parameter sequence indexed from n = 1, evaluated lazily.

    Every value the schedule can emit is checked against its role's range at
    construction time.
    """

    kind: ScheduleKind
    params: tuple[float, ...]
    role: ScheduleRole

    def __post_init__(self) -> None:
        kind = ScheduleKind(self.kind)
        role = ScheduleRole(self.role)
        params = tuple(float(p) for p in self.params)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "role", role)
        object.__setattr__(self, "params", params)

        expected = {
            ScheduleKind.CONSTANT: 1,
            ScheduleKind.HARMONIC: 1,
            ScheduleKind.SCALED_HARMONIC: 2,
        }.get(kind)
        if expected is not None and len(params) != expected:
            raise ArgumentError(f"{kind.value} schedule takes {expected} parameter(s), got {len(params)}")
        if kind == ScheduleKind.CUSTOM_LIST and not params:
            raise ArgumentError("custom-list schedule needs at least one value")
        if not all(math.isfinite(p) for p in params):
            raise ArgumentError(f"{role.value} schedule has non-finite parameters")
        if kind in (ScheduleKind.HARMONIC, ScheduleKind.SCALED_HARMONIC) and params[0] < 0:
            raise ArgumentError("harmonic schedules need c >= 0")
        if kind == ScheduleKind.SCALED_HARMONIC and params[1] <= -1:
            raise ArgumentError("scaled-harmonic shift must be > -1")
        self._check_range()

    # constructors -------------------------------------------------------

    @classmethod
    def constant(cls, value: float, role: ScheduleRole) -> "Schedule":
        return cls(ScheduleKind.CONSTANT, (value,), role)

    @classmethod
    def harmonic(cls, c: float, role: ScheduleRole) -> "Schedule":
        return cls(ScheduleKind.HARMONIC, (c,), role)

    @classmethod
    def scaled_harmonic(cls, c: float, shift: float, role: ScheduleRole) -> "Schedule":
        return cls(ScheduleKind.SCALED_HARMONIC, (c, shift), role)

    @classmethod
    def custom(cls, values, role: ScheduleRole) -> "Schedule":
        return cls(ScheduleKind.CUSTOM_LIST, tuple(values), role)

    # evaluation ---------------------------------------------------------

    def value(self, n: int) -> float:
        if n < 1:
            raise ArgumentError(f"schedules are indexed from n = 1, got {n}")
        if self.kind == ScheduleKind.CONSTANT:
            return self.params[0]
        if self.kind == ScheduleKind.HARMONIC:
            return self.params[0] / n
        if self.kind == ScheduleKind.SCALED_HARMONIC:
            return self.params[0] / (n + self.params[1])
        return self.params[min(n, len(self.params)) - 1]

    __call__ = value

    def bounds(self) -> tuple[float, float, bool]:
        """(infimum, supremum, infimum attained) over n >= 1."""
        if self.kind == ScheduleKind.CONSTANT:
            c = self.params[0]
            return c, c, True
        if self.kind in (ScheduleKind.HARMONIC, ScheduleKind.SCALED_HARMONIC):
            top = self.value(1)
            return 0.0, top, top == 0.0
        return min(self.params), max(self.params), True

    def limit(self) -> float:
        if self.kind == ScheduleKind.CONSTANT:
            return self.params[0]
        if self.kind == ScheduleKind.CUSTOM_LIST:
            return self.params[-1]
        return 0.0

    def sum_diverges(self) -> bool:
        if self.kind in (ScheduleKind.CONSTANT, ScheduleKind.CUSTOM_LIST):
            return self.limit() > 0
        return self.params[0] > 0

    def is_zero(self) -> bool:
        low, high, _ = self.bounds()
        return low == 0.0 and high == 0.0

    def is_eventually_zero(self) -> bool:
        return (self.kind == ScheduleKind.CUSTOM_LIST and self.params[-1] == 0.0) or self.is_zero()

    def describe(self) -> str:
        prefix = {
            ScheduleKind.CONSTANT: "const",
            ScheduleKind.HARMONIC: "harmonic",
            ScheduleKind.SCALED_HARMONIC: "scaled-harmonic",
            ScheduleKind.CUSTOM_LIST: "list",
        }[self.kind]
        return f"{prefix}:" + ",".join(repr(p) for p in self.params)

    def _check_range(self) -> None:
        low, high, low_open, high_open = ROLE_RANGES[self.role]
        inf, sup, attained = self.bounds()
        too_low = inf < low or (low_open and inf == low and attained)
        too_high = sup > high or (high_open and sup == high)
        if too_low or too_high:
            lb = "(" if low_open else "["
            rb = ")" if high_open else "]"
            raise ArgumentError(
                f"{self.role.value} schedule {self.describe()} leaves {lb}{low}, {high}{rb}"
            )


def parse_schedule(text: str, role: ScheduleRole | str) -> Schedule:
    """
    Parse a CLI schedule spec: "const:0.5", "harmonic:0.1" (0.1/n),
    "scaled-harmonic:0.5,10" (0.5/(n+10)), "list:0.5,0.25" or a bare number.
    """
    role = ScheduleRole(role)
    raw = (text or "").strip()
    if not raw:
        raise ArgumentError(f"empty {role.value} schedule spec")
    head, sep, tail = raw.partition(":")
    if not sep:
        head, tail = "const", raw
    kind = _KIND_ALIASES.get(head.strip().lower())
    if kind is None:
        raise ArgumentError(f"unknown schedule kind '{head}' in '{text}'")
    try:
        params = tuple(float(p) for p in tail.split(",") if p.strip())
    except ValueError:
        raise ArgumentError(f"schedule parameters must be numbers: '{text}'") from None
    return Schedule(kind, params, role)
