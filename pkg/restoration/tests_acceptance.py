"""End-to-end bench runs on the bundled phantom and the seeded lasso demo."""
import tempfile
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.test import SimpleTestCase

from restoration.services.experiment_config import resolve_experiment_config
from restoration.services.experiments import LassoDemoConfig, run_compare, run_lasso_demo
from restoration.services.trace_csv import read_trace_csv


def _call(name, **options):
    call_command(name, stdout=StringIO(), stderr=StringIO(), verbosity=0, **options)


class PhantomBenchTests(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)
        self.original = self.dir / "phantom.pgm"
        _call("make_phantom", size=64, output=str(self.original))

    def tearDown(self):
        self.tmp.cleanup()

    def degrade(self, output):
        _call("degrade", input=str(self.original), output=str(output),
              kernel="gaussian:9,4", noise_sigma="1e-3", seed="42")

    def test_snr_ordering_on_phantom(self):
        degraded = self.dir / "degraded.pgm"
        self.degrade(degraded)
        cfg = resolve_experiment_config(
            {
                "preset": "cameraman",
                "kernel": "gaussian:9,4",
                "input": str(degraded),
                "original": str(self.original),
                "table": str(self.dir / "table.csv"),
                "algorithms": "lorenz-pock,apfbnsm,new",
                "checkpoints": "1,100,250,500,1000",
            }
        )
        outcome = run_compare(cfg)
        lp, ap, new = (outcome.table[a] for a in ("lorenz-pock", "apfbnsm", "new"))
        for k, it in enumerate(outcome.checkpoints):
            if it < 100:
                continue
            self.assertGreaterEqual(new[k], ap[k], f"new < apfbnsm at {it}")
            self.assertGreaterEqual(ap[k], lp[k], f"apfbnsm < lorenz-pock at {it}")
        for column in (lp, ap, new):
            self.assertGreater(column[-1], column[0])

    def test_pipeline_is_deterministic(self):
        outputs = []
        for name in ("first", "second"):
            run_dir = self.dir / name
            run_dir.mkdir()
            degraded = run_dir / "degraded.pgm"
            self.degrade(degraded)
            _call("compare", input=str(degraded), original=str(self.original),
                  table=str(run_dir / "table.csv"), trace_dir=str(run_dir), checkpoints="1,10,50")
            outputs.append(run_dir)
        first, second = outputs
        for fname in ("degraded.pgm", "table.csv"):
            self.assertEqual((first / fname).read_bytes(), (second / fname).read_bytes(), fname)
        for alg in ("lorenz-pock", "apfbnsm", "new"):
            a, b = read_trace_csv(first / f"{alg}.csv"), read_trace_csv(second / f"{alg}.csv")
            # wall-clock column aside, the traces agree exactly
            self.assertEqual(
                [(r.iter, r.snr_db, r.objective, r.residual_m_norm) for r in a],
                [(r.iter, r.snr_db, r.objective, r.residual_m_norm) for r in b],
            )


class LassoDemoAcceptanceTests(SimpleTestCase):
    def test_every_algorithm_meets_kkt_target(self):
        report = run_lasso_demo(LassoDemoConfig(dimension=50))
        self.assertEqual(len(report.entries), 5)
        self.assertLessEqual(report.reference_kkt, 1e-6)
        for entry in report.entries:
            self.assertLessEqual(entry.iterations, 10_000)
            self.assertLessEqual(entry.kkt_residual, 1e-3, entry.algorithm.value)
        self.assertTrue(report.ok)
