# restoration/services/recording.py
from __future__ import annotations

import logging
import math
from typing import Any, Iterable, Mapping, Sequence

from django.db import transaction
from django.utils import timezone

from restoration.models import ExperimentRun, RunCheckpoint

from .trace_csv import TraceRow

logger = logging.getLogger(__name__)


def _finite_or_none(value: float | None) -> float | None:
    if value is None or not math.isfinite(value):
        return None
    return float(value)


def json_safe(value: Any) -> Any:
    """JSON columns reject inf and nan; store them as null."""
    if isinstance(value, float):
        return _finite_or_none(value)
    if isinstance(value, Mapping):
        return {str(k): json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_safe(v) for v in value]
    return value


def start_run(kind: str, config: Mapping[str, Any], algorithms: Iterable[str] = ()) -> ExperimentRun:
    run = ExperimentRun.objects.create(
        kind=kind,
        config=json_safe(config),
        algorithms=list(algorithms),
    )
    logger.debug("[Record] run %d started (%s)", run.pk, kind)
    return run


def finish_run(
    run: ExperimentRun,
    *,
    summary: Mapping[str, Any] | None = None,
    lipschitz: float | None = None,
    traces: Mapping[str, Sequence[TraceRow]] | None = None,
    checkpoints: Sequence[int] | None = None,
) -> ExperimentRun:
    """
    Mark the run finished and store one RunCheckpoint per (algorithm,
    checkpoint) present in the traces. Without `checkpoints`, every row is kept.
    """
    wanted = set(checkpoints) if checkpoints is not None else None
    rows = []
    for algorithm, trace in (traces or {}).items():
        for row in trace:
            if wanted is not None and row.iter not in wanted:
                continue
            rows.append(
                RunCheckpoint(
                    run=run,
                    algorithm=algorithm,
                    iteration=row.iter,
                    snr_db=_finite_or_none(row.snr_db),
                    objective=row.objective,
                    residual_m_norm=row.residual_m_norm,
                    elapsed_s=row.elapsed_s,
                )
            )

    with transaction.atomic():
        RunCheckpoint.objects.bulk_create(rows)
        run.status = ExperimentRun.Status.FINISHED
        run.summary = json_safe(summary or {})
        run.lipschitz = lipschitz
        run.finished_at = timezone.now()
        run.save(update_fields=["status", "summary", "lipschitz", "finished_at"])
    logger.info("[Record] run %d finished, %d checkpoints stored", run.pk, len(rows))
    return run


def fail_run(run: ExperimentRun, error: str) -> ExperimentRun:
    run.status = ExperimentRun.Status.FAILED
    run.error = error
    run.finished_at = timezone.now()
    run.save(update_fields=["status", "error", "finished_at"])
    logger.warning("[Record] run %d failed: %s", run.pk, error)
    return run


def snr_table(run: ExperimentRun) -> dict[str, Any]:
    """Checkpoint x algorithm SNR grid, columns in the run's algorithm order."""
    algorithms = list(run.algorithms) or sorted(
        set(run.checkpoints.values_list("algorithm", flat=True))
    )
    grid: dict[int, dict[str, float | None]] = {}
    for cp in run.checkpoints.all():
        grid.setdefault(cp.iteration, {})[cp.algorithm] = cp.snr_db
    return {
        "columns": ["iter", *algorithms],
        "rows": [
            [iteration, *(grid[iteration].get(a) for a in algorithms)]
            for iteration in sorted(grid)
        ],
    }
