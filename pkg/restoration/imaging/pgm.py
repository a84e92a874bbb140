# restoration/imaging/pgm.py
"""
Grayscale PGM codec: P2 (plain) and P5 (raw), maxval <= 255.

Header comments are skipped, not kept. Every parse error carries the byte
offset where reading stopped.
"""
from __future__ import annotations

import logging
import os

import numpy as np

from restoration.atomic import atomic_write_bytes
from restoration.exceptions import PgmFormatError, UnsupportedPgmError

from .image import Image

logger = logging.getLogger(__name__)

WHITESPACE = b" \t\r\n\v\f"
MAXVAL = 255
PLAIN_VALUES_PER_LINE = 16
_OTHER_NETPBM = {b"P1", b"P3", b"P4", b"P6", b"P7"}


class _Reader:
    def __init__(self, data: bytes) -> None:
        self.data = data
        self.pos = 0

    def skip_space(self) -> None:
        data = self.data
        while self.pos < len(data):
            ch = data[self.pos : self.pos + 1]
            if ch == b"#":
                end = data.find(b"\n", self.pos)
                self.pos = len(data) if end < 0 else end + 1
            elif ch in WHITESPACE:
                self.pos += 1
            else:
                return

    def integer(self, what: str) -> int:
        self.skip_space()
        start = self.pos
        while self.pos < len(self.data) and self.data[self.pos : self.pos + 1].isdigit():
            self.pos += 1
        if start == self.pos:
            if self.pos >= len(self.data):
                raise PgmFormatError(f"unexpected end of file reading {what}", self.pos)
            raise PgmFormatError(f"expected a decimal integer for {what}", self.pos)
        return int(self.data[start : self.pos])


def decode_pgm(data: bytes) -> Image:
    magic = data[:2]
    if magic in _OTHER_NETPBM:
        raise UnsupportedPgmError(
            f"{magic.decode()} is not a grayscale PGM; convert the image to P2/P5 first", 0
        )
    if magic not in (b"P2", b"P5"):
        raise PgmFormatError("bad magic number, expected P2 or P5", 0)

    reader = _Reader(data)
    reader.pos = 2
    if reader.pos < len(data) and data[2:3] not in WHITESPACE and data[2:3] != b"#":
        raise PgmFormatError("magic number must be followed by whitespace", 2)

    reader.skip_space()
    width_at = reader.pos
    width = reader.integer("width")
    height = reader.integer("height")
    if width < 1 or height < 1:
        raise PgmFormatError(f"image dimensions must be positive, got {width}x{height}", width_at)
    reader.skip_space()
    maxval_at = reader.pos
    maxval = reader.integer("maxval")
    if maxval < 1:
        raise PgmFormatError("maxval must be >= 1", maxval_at)
    if maxval > MAXVAL:
        raise UnsupportedPgmError(f"maxval {maxval} > {MAXVAL} (16-bit PGM) is not supported", maxval_at)

    count = width * height
    if magic == b"P5":
        # exactly one whitespace byte separates the header from the raster
        if reader.pos >= len(data) or data[reader.pos : reader.pos + 1] not in WHITESPACE:
            raise PgmFormatError("missing whitespace after maxval", reader.pos)
        start = reader.pos + 1
        available = len(data) - start
        if available < count:
            raise PgmFormatError(
                f"truncated payload: missing {count - available} of {count} bytes", len(data)
            )
        raw = np.frombuffer(data, dtype=np.uint8, count=count, offset=start)
    else:
        raw = np.empty(count, dtype=np.int64)
        for k in range(count):
            at = reader.pos
            value = reader.integer(f"pixel {k}")
            if value > maxval:
                raise PgmFormatError(f"pixel value {value} exceeds maxval {maxval}", at)
            raw[k] = value

    if raw.max(initial=0) > maxval:
        raise PgmFormatError(f"pixel values exceed maxval {maxval}", 0)
    return Image(width, height, raw.astype(np.float64) / maxval)


def load_pgm(path: str | os.PathLike) -> Image:
    with open(path, "rb") as fh:
        data = fh.read()
    img = decode_pgm(data)
    logger.debug("[PGM] loaded %s (%dx%d)", path, img.width, img.height)
    return img


def quantize(img: Image) -> np.ndarray:
    """Clamp to [0, 1] and round onto the 0..255 grid."""
    return np.rint(np.clip(img.pixels, 0.0, 1.0) * MAXVAL).astype(np.uint8)


def encode_pgm(img: Image, binary: bool = True) -> bytes:
    levels = quantize(img)
    header = f"{'P5' if binary else 'P2'}\n{img.width} {img.height}\n{MAXVAL}\n".encode("ascii")
    if binary:
        return header + levels.tobytes()
    lines = []
    for start in range(0, levels.size, PLAIN_VALUES_PER_LINE):
        lines.append(" ".join(str(v) for v in levels[start : start + PLAIN_VALUES_PER_LINE].tolist()))
    return header + ("\n".join(lines) + "\n").encode("ascii")


def save_pgm(img: Image, path: str | os.PathLike, binary: bool = True) -> None:
    atomic_write_bytes(path, encode_pgm(img, binary=binary))
    logger.debug("[PGM] wrote %s (%s, %dx%d)", path, "P5" if binary else "P2", img.width, img.height)
