from restoration.services.experiment_config import resolve_experiment_config
from restoration.services.experiments import run_degrade
from restoration.services.recording import fail_run, finish_run, start_run

from ._shared import BenchCommand, add_experiment_arguments, experiment_flags


class Command(BenchCommand):
    help = "Blur a PGM with a periodic kernel, add seeded Gaussian noise, write PGM + JSON sidecar."

    def add_arguments(self, parser):
        add_experiment_arguments(parser)

    def run(self, **options):
        cfg = resolve_experiment_config(experiment_flags(options), config_path=options.get("config_file"))
        run = start_run("degrade", cfg.echo()) if cfg.record else None
        try:
            outcome = run_degrade(cfg)
        except Exception as exc:
            if run is not None:
                fail_run(run, str(exc))
            raise
        if run is not None:
            finish_run(run, summary=outcome.metadata, lipschitz=outcome.metadata["lipschitz"])

        self.stdout.write(
            self.style.SUCCESS(
                f"degraded image -> {outcome.output} (sidecar {outcome.sidecar}, "
                f"L_h={outcome.metadata['lipschitz']:.6g})"
            )
        )
