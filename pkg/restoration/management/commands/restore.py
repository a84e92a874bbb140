from dataclasses import replace

from restoration.services.experiment_config import resolve_experiment_config
from restoration.services.experiments import read_sidecar, run_restore
from restoration.services.recording import fail_run, finish_run, start_run

from ._shared import BenchCommand, add_experiment_arguments, experiment_flags


def restore_config(options, command: str):
    """Settings for restore/compare, with the degrade sidecar of --input under the flags."""
    flags = experiment_flags(options)
    sidecar = read_sidecar(flags["input"]) if flags.get("input") else {}
    base = {"algorithms": "lorenz-pock,apfbnsm,new"} if command == "compare" else {}
    cfg = resolve_experiment_config(
        flags, config_path=options.get("config_file"), sidecar=sidecar, base=base
    )
    # a stored L_h only holds for the kernel it was computed with
    stored = sidecar.get("lipschitz")
    if stored is not None and cfg.lipschitz == stored and cfg.kernel != sidecar.get("kernel"):
        cfg = replace(cfg, lipschitz=None)
    return cfg


class Command(BenchCommand):
    help = "Restore a degraded PGM with one solver; writes the restored PGM and a CSV trace."

    def add_arguments(self, parser):
        add_experiment_arguments(parser, algorithms_flag="--algorithm")
        parser.add_argument("--trace", help="per-iteration CSV trace")

    def run(self, **options):
        cfg = restore_config(options, "restore")
        run = start_run("restore", cfg.echo(), [a.value for a in cfg.algorithms]) if cfg.record else None
        try:
            outcome = run_restore(cfg)
        except Exception as exc:
            if run is not None:
                fail_run(run, str(exc))
            raise

        final = outcome.run.rows[-1]
        if run is not None:
            finish_run(
                run,
                summary={"iterations": final.iter, "final_snr_db": final.snr_db},
                lipschitz=outcome.lipschitz,
                traces={outcome.run.algorithm.value: outcome.run.rows},
                checkpoints=cfg.checkpoints,
            )
        self.stdout.write(
            self.style.SUCCESS(
                f"{outcome.run.algorithm.value}: {final.iter} iterations, SNR {final.snr_db:.6f} dB"
            )
        )
