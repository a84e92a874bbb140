from restoration.services.experiments import run_compare
from restoration.services.recording import fail_run, finish_run, start_run
from restoration.services.trace_csv import format_real

from ._shared import BenchCommand, add_experiment_arguments
from .restore import restore_config


class Command(BenchCommand):
    help = (
        "Run several solvers from the same degraded start and write an SNR table "
        "(one row per checkpoint, one column per algorithm)."
    )

    def add_arguments(self, parser):
        add_experiment_arguments(parser)
        parser.add_argument("--table", help="SNR table CSV")
        parser.add_argument("--trace-dir", dest="trace_dir", help="directory for per-algorithm traces (default: the table directory)")
        parser.add_argument("--workers", help="threads used to run the algorithms")

    def run(self, **options):
        cfg = restore_config(options, "compare")
        algorithms = [a.value for a in cfg.algorithms]
        run = start_run("compare", cfg.echo(), algorithms) if cfg.record else None
        try:
            outcome = run_compare(cfg)
        except Exception as exc:
            if run is not None:
                fail_run(run, str(exc))
            raise

        if run is not None:
            finish_run(
                run,
                summary={"table": {"checkpoints": list(outcome.checkpoints), **outcome.table}},
                lipschitz=outcome.lipschitz,
                traces={r.algorithm.value: r.rows for r in outcome.runs},
                checkpoints=outcome.checkpoints,
            )

        self.stdout.write("iter," + ",".join(algorithms))
        for k, it in enumerate(outcome.checkpoints):
            cells = (format_real(outcome.table[a][k]) for a in algorithms)
            self.stdout.write(f"{it}," + ",".join(cells))
        self.stdout.write(self.style.SUCCESS(f"SNR table -> {cfg.table}"))
