# restoration/management/commands/_shared.py
"""
Option wiring and exit-code mapping shared by the bench commands.

Exit codes: 0 success, 1 demo targets missed, 2 argument/config error,
3 I/O error, 4 numerical divergence.
"""
from __future__ import annotations

import logging
from typing import Any

from django.core.management.base import BaseCommand, CommandError

from restoration.exceptions import ArgumentError, ConfigError, NumericalError

EXIT_TARGETS_MISSED = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_NUMERICAL = 4

_VERBOSITY_LEVELS = {0: logging.WARNING, 1: logging.INFO, 2: logging.INFO, 3: logging.DEBUG}

# option dest -> settings key understood by resolve_experiment_config
EXPERIMENT_OPTIONS = (
    "preset",
    "input",
    "original",
    "output",
    "trace",
    "table",
    "trace_dir",
    "kernel",
    "noise_sigma",
    "seed",
    "rho",
    "lam",
    "theta",
    "theta_mode",
    "alpha",
    "beta",
    "contraction",
    "algorithms",
    "iters",
    "checkpoints",
    "stop_tol",
    "workers",
    "lipschitz",
    "plain",
    "record",
)


def add_experiment_arguments(parser, *, algorithms_flag: str = "--algorithms") -> None:
    # every value stays a string here; resolve_experiment_config parses them
    parser.add_argument("--config", dest="config_file", help="key = value settings file")
    parser.add_argument("--preset", help="cameraman | mountain parameter set")
    parser.add_argument("--input", help="input PGM")
    parser.add_argument("--original", help="pristine PGM used for the SNR column")
    parser.add_argument("--output", help="output PGM")
    parser.add_argument("--kernel", help="gaussian:size,sigma | motion:length,angle | delta")
    parser.add_argument("--noise-sigma", dest="noise_sigma")
    parser.add_argument("--seed")
    parser.add_argument("--rho", help="l1 weight")
    parser.add_argument("--lambda", dest="lam")
    parser.add_argument("--theta", help="inertia schedule, e.g. const:0.1")
    parser.add_argument("--theta-mode", dest="theta_mode", choices=["constant", "adaptive"])
    parser.add_argument("--alpha", help="S-iteration schedule, e.g. const:0.5")
    parser.add_argument("--beta", help="anchor schedule, e.g. harmonic:0.1 for 0.1/n")
    parser.add_argument("--contraction", help="k in f(x) = k x")
    parser.add_argument(algorithms_flag, dest="algorithms")
    parser.add_argument("--iters")
    parser.add_argument("--checkpoints", help="comma-separated, strictly increasing")
    parser.add_argument("--stop-tol", dest="stop_tol", help="0 runs exactly --iters iterations")
    parser.add_argument("--lipschitz", help="override the L_h estimate")
    parser.add_argument("--plain", action="store_true", help="write P2 instead of P5")
    parser.add_argument("--record", action="store_true", help="store the run in the database")


def experiment_flags(options: dict[str, Any]) -> dict[str, Any]:
    """Options the user actually set (store_true flags count only when True)."""
    return {
        key: options[key]
        for key in EXPERIMENT_OPTIONS
        if options.get(key) is not None and options.get(key) is not False
    }


class BenchCommand(BaseCommand):
    """Runs `run()` and turns library errors into CommandError exit codes."""

    def handle(self, *args, **options):
        level = _VERBOSITY_LEVELS.get(options.get("verbosity", 1), logging.INFO)
        logging.getLogger("restoration").setLevel(level)
        try:
            return self.run(**options)
        except CommandError:
            raise
        except (ArgumentError, ConfigError) as exc:
            raise CommandError(str(exc), returncode=EXIT_USAGE) from exc
        except NumericalError as exc:
            raise CommandError(str(exc), returncode=EXIT_NUMERICAL) from exc
        except OSError as exc:
            raise CommandError(f"I/O error: {exc}", returncode=EXIT_IO) from exc

    def run(self, **options):
        raise NotImplementedError
