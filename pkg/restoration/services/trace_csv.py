# restoration/services/trace_csv.py
"""
CSV artifacts: per-iteration traces and checkpoint SNR tables.

Reals are printed with 9 significant digits, +inf as `inf`, LF endings.
Files are replaced atomically.
"""
from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from restoration.atomic import atomic_write_text
from restoration.exceptions import ArgumentError

TRACE_HEADER = ("iter", "snr_db", "objective", "residual_m_norm", "elapsed_s")


@dataclass(frozen=True)
class TraceRow:
    iter: int
    snr_db: float
    objective: float
    residual_m_norm: float
    elapsed_s: float


def format_real(value: float | None) -> str:
    if value is None:
        return ""
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if math.isnan(value):
        return "nan"
    return f"{value:.9g}"


def _render(rows: Sequence[Sequence[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


def write_trace_csv(rows: Sequence[TraceRow], path: str | os.PathLike) -> Path:
    if not rows:
        raise ArgumentError("a trace needs at least one row")
    for prev, row in zip(rows, rows[1:]):
        if row.iter <= prev.iter:
            raise ArgumentError(f"trace iterations must increase, got {prev.iter} then {row.iter}")
    lines = [TRACE_HEADER]
    for row in rows:
        lines.append(
            (
                str(row.iter),
                format_real(row.snr_db),
                format_real(row.objective),
                format_real(row.residual_m_norm),
                format_real(row.elapsed_s),
            )
        )
    return atomic_write_text(path, _render(lines))


def read_trace_csv(path: str | os.PathLike) -> list[TraceRow]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if tuple(header or ()) != TRACE_HEADER:
            raise ArgumentError(f"{path}: not a trace file, header is {header!r}")
        return [
            TraceRow(int(r[0]), float(r[1]), float(r[2]), float(r[3]), float(r[4]))
            for r in reader
            if r
        ]


def write_snr_table(
    checkpoints: Sequence[int],
    columns: Mapping[str, Sequence[float | None]],
    path: str | os.PathLike,
) -> Path:
    """
    One row per checkpoint, one SNR column per algorithm in mapping order.
    A missing value (run stopped before the checkpoint) is an empty cell.
    """
    if not checkpoints:
        raise ArgumentError("an SNR table needs at least one checkpoint")
    for name, values in columns.items():
        if len(values) != len(checkpoints):
            raise ArgumentError(f"column '{name}' has {len(values)} values for {len(checkpoints)} checkpoints")
    lines = [("iter", *columns.keys())]
    for k, it in enumerate(checkpoints):
        lines.append((str(it), *(format_real(values[k]) for values in columns.values())))
    return atomic_write_text(path, _render(lines))
