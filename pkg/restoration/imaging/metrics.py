# restoration/imaging/metrics.py
from __future__ import annotations

import math

import numpy as np

from restoration.exceptions import ArgumentError

from .image import Image


def _flat(img) -> np.ndarray:
    if isinstance(img, Image):
        return img.pixels
    return np.asarray(img, dtype=np.float64).reshape(-1)


def snr_db(reference, estimate) -> float:
    """20 log10(||x|| / ||x - x_n||); math.inf when the estimate is exact."""
    if isinstance(reference, Image) and isinstance(estimate, Image):
        if reference.shape != estimate.shape:
            raise ArgumentError(f"image size mismatch: {reference.shape} vs {estimate.shape}")
    x, xn = _flat(reference), _flat(estimate)
    if x.shape != xn.shape:
        raise ArgumentError(f"dimension mismatch: {x.shape[0]} vs {xn.shape[0]}")
    signal = float(np.linalg.norm(x))
    if signal == 0.0:
        raise ArgumentError("SNR is undefined for an all-zero reference")
    error = float(np.linalg.norm(x - xn))
    if error == 0.0:
        return math.inf
    return 20.0 * math.log10(signal / error)
