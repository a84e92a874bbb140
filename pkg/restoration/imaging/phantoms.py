# restoration/imaging/phantoms.py
from __future__ import annotations

import numpy as np

from restoration.exceptions import ArgumentError

from .image import Image

STRIPE_PERIOD = 8


def make_phantom(size: int = 64) -> Image:
    """
    Deterministic piecewise-constant test image: a soft diagonal gradient
    with rectangles, disks and a thin bar on top, plus a band of vertical
    stripes along the top edge. Values stay in [0, 1].
    """
    if size < 8:
        raise ArgumentError(f"phantom size must be >= 8, got {size}")
    rows, cols = np.mgrid[0:size, 0:size] / float(size)
    img = 0.15 + 0.15 * (rows + cols) / 2.0

    img[(rows >= 0.15) & (rows < 0.45) & (cols >= 0.1) & (cols < 0.4)] = 0.8
    img[(rows - 0.65) ** 2 + (cols - 0.65) ** 2 < 0.2 ** 2] = 0.6
    img[(rows - 0.65) ** 2 + (cols - 0.65) ** 2 < 0.07 ** 2] = 1.0
    img[(rows >= 0.7) & (rows < 0.9) & (cols >= 0.12) & (cols < 0.3)] = 0.35
    img[(rows >= 0.2) & (rows < 0.5) & (cols >= 0.62) & (cols < 0.67)] = 0.0

    # 8-px stripes sit where the gaussian:9,4 response is nearly zero,
    # so deblurring recovers them slowly
    band = rows < 0.125
    phase = (np.arange(size) // (STRIPE_PERIOD // 2)) % 2
    img[band] = np.broadcast_to(np.where(phase == 0, 0.3, 0.7), (size, size))[band]
    return Image.from_array(img)
