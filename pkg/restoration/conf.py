# restoration/conf.py
from __future__ import annotations

from typing import Any

from django.conf import settings

DEFAULTS: dict[str, Any] = {
    "POWER_ITERATION_MAX_ITERS": 1000,
    "POWER_ITERATION_TOL": 1e-8,
    "POWER_ITERATION_SEED": 12345,
    "DEFAULT_NOISE_SIGMA": 1e-3,
    "DEFAULT_STOP_TOL": 1e-10,
    "DEFAULT_CHECKPOINTS": [1, 5, 10, 25, 50, 100, 250, 500, 1000],
    "COMPARE_WORKERS": 1,
}


def get(key: str) -> Any:
    """settings.RESTORATION[key], falling back to the library default."""
    overrides = getattr(settings, "RESTORATION", None) if settings.configured else None
    if overrides and key in overrides:
        return overrides[key]
    return DEFAULTS[key]
