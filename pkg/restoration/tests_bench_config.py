import tempfile
from pathlib import Path

from django.test import SimpleTestCase, override_settings

from restoration.exceptions import ArgumentError, ConfigError
from restoration.services.experiment_config import (
    ExperimentConfig,
    read_config_file,
    resolve_experiment_config,
)
from restoration.services.trace_csv import (
    TraceRow,
    format_real,
    read_trace_csv,
    write_snr_table,
    write_trace_csv,
)
from restoration.solvers import Algorithm


class TempDirMixin:
    def setUp(self):
        super().setUp()
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()
        super().tearDown()


class ResolveConfigTests(TempDirMixin, SimpleTestCase):
    def test_defaults(self):
        cfg = resolve_experiment_config({})
        self.assertEqual(cfg.checkpoints, (1, 5, 10, 25, 50, 100, 250, 500, 1000))
        self.assertEqual(cfg.iters, 1000)
        self.assertEqual(cfg.algorithms, (Algorithm.NEW,))
        self.assertEqual(cfg.stop_tol, 0.0)
        self.assertEqual(cfg.noise_sigma, 1e-3)

    @override_settings(RESTORATION={"DEFAULT_NOISE_SIGMA": 0.01, "DEFAULT_CHECKPOINTS": [1, 2, 3]})
    def test_settings_defaults(self):
        cfg = resolve_experiment_config({})
        self.assertEqual(cfg.noise_sigma, 0.01)
        self.assertEqual(cfg.checkpoints, (1, 2, 3))
        self.assertEqual(cfg.iters, 3)

    def test_iters_cuts_default_checkpoints(self):
        self.assertEqual(resolve_experiment_config({"iters": "60"}).checkpoints, (1, 5, 10, 25, 50))
        zero = resolve_experiment_config({"iters": 0})
        self.assertEqual((zero.iters, zero.checkpoints), (0, ()))

    def test_explicit_checkpoints(self):
        cfg = resolve_experiment_config({"checkpoints": "2,4,8"})
        self.assertEqual((cfg.checkpoints, cfg.iters), ((2, 4, 8), 8))
        with self.assertRaises(ConfigError):
            resolve_experiment_config({"checkpoints": "2,4,8", "iters": "5"})
        with self.assertRaises(ConfigError):
            resolve_experiment_config({"checkpoints": "1,5,5"})
        with self.assertRaises(ArgumentError):
            resolve_experiment_config({"checkpoints": "1,five"})

    def test_file_then_flags(self):
        path = self.dir / "bench.conf"
        path.write_text(
            "# restoration bench\n"
            "kernel = motion:9,45\n"
            "noise-sigma = 0.002\n"
            "lambda = 0.5   # step\n"
            "\n"
            "algorithms = fbs, lorenz-pock\n"
        )
        cfg = resolve_experiment_config({"lam": "0.9"}, config_path=path)
        self.assertEqual(cfg.kernel, "motion:9,45")
        self.assertEqual(cfg.noise_sigma, 0.002)
        self.assertEqual(cfg.lam, 0.9)
        self.assertEqual(cfg.algorithms, (Algorithm.FBS, Algorithm.LORENZ_POCK))

    def test_preset_under_explicit_values(self):
        cfg = resolve_experiment_config({"preset": "mountain", "theta": "const:0.2"})
        self.assertEqual(cfg.theta, "const:0.2")
        self.assertEqual(cfg.beta, "harmonic:0.5")
        self.assertEqual(cfg.contraction, 0.9999)
        self.assertEqual(cfg.kernel, "gaussian:9,4")
        self.assertEqual(resolve_experiment_config({"preset": "cameraman"}).kernel, "motion:9,0")

    def test_sidecar_between_preset_and_flags(self):
        sidecar = {"kernel": "gaussian:5,1", "lipschitz": 0.9}
        cfg = resolve_experiment_config({"preset": "cameraman"}, sidecar=sidecar)
        self.assertEqual((cfg.kernel, cfg.lipschitz), ("gaussian:5,1", 0.9))
        cfg = resolve_experiment_config({"kernel": "delta"}, sidecar=sidecar)
        self.assertEqual(cfg.kernel, "delta")

    def test_bad_file_line(self):
        path = self.dir / "bad.conf"
        path.write_text("kernel gaussian:9,4\n")
        with self.assertRaises(ConfigError) as cm:
            read_config_file(path)
        self.assertIn(":1:", str(cm.exception))

    def test_unknown_setting(self):
        with self.assertRaises(ConfigError):
            resolve_experiment_config({"colour": "red"})

    def test_unknown_algorithm_and_preset(self):
        with self.assertRaises(ArgumentError):
            resolve_experiment_config({"algorithms": "fista"})
        with self.assertRaises(ArgumentError):
            resolve_experiment_config({"preset": "lena"})

    def test_solver_config(self):
        cfg = resolve_experiment_config({"preset": "cameraman"})
        sc = cfg.solver_config(Algorithm.NEW)
        self.assertAlmostEqual(sc.beta.value(10), 0.01)
        self.assertEqual(sc.theta.value(3), 0.1)
        self.assertEqual(sc.contraction.coefficient, 0.99)
        self.assertEqual(sc.max_iters, 1000)
        self.assertEqual(sc.stop_tol, 0.0)

    def test_needs_an_algorithm(self):
        with self.assertRaises(ConfigError):
            ExperimentConfig(algorithms=())


class TraceCsvTests(TempDirMixin, SimpleTestCase):
    def test_single_row_file(self):
        path = self.dir / "trace.csv"
        write_trace_csv([TraceRow(1, 35.358278, 12.5, 0.001, 0.25)], path)
        self.assertEqual(
            path.read_bytes(),
            b"iter,snr_db,objective,residual_m_norm,elapsed_s\n1,35.358278,12.5,0.001,0.25\n",
        )

    def test_empty_rows_rejected(self):
        with self.assertRaises(ArgumentError):
            write_trace_csv([], self.dir / "t.csv")
        self.assertFalse((self.dir / "t.csv").exists())

    def test_iterations_must_increase(self):
        rows = [TraceRow(2, 1.0, 1.0, 1.0, 0.0), TraceRow(2, 1.0, 1.0, 1.0, 0.0)]
        with self.assertRaises(ArgumentError):
            write_trace_csv(rows, self.dir / "t.csv")

    def test_round_trip_at_printed_precision(self):
        rows = [
            TraceRow(0, float("inf"), 1234.56789012345, 3.14159265358979e-7, 0.0),
            TraceRow(1, 41.123456789123, 0.1 + 0.2, 1e-300, 12.3456789),
        ]
        path = write_trace_csv(rows, self.dir / "t.csv")
        back = read_trace_csv(path)
        for row, parsed in zip(rows, back):
            self.assertEqual(parsed.iter, row.iter)
            for field in ("snr_db", "objective", "residual_m_norm", "elapsed_s"):
                self.assertEqual(getattr(parsed, field), float(format_real(getattr(row, field))))
        self.assertIn(b"\n0,inf,", path.read_bytes())
        self.assertNotIn(b"\r", path.read_bytes())

    def test_format_real(self):
        self.assertEqual(format_real(63.000553), "63.000553")
        self.assertEqual(format_real(1 / 3), "0.333333333")
        self.assertEqual(format_real(float("inf")), "inf")
        self.assertEqual(format_real(None), "")

    def test_snr_table(self):
        path = self.dir / "table.csv"
        write_snr_table([1, 5], {"lorenz-pock": [10.5, 20.25], "new": [11.0, None]}, path)
        self.assertEqual(path.read_text(), "iter,lorenz-pock,new\n1,10.5,11\n5,20.25,\n")
        with self.assertRaises(ArgumentError):
            write_snr_table([1, 5], {"new": [1.0]}, path)
