import json
import tempfile
from io import StringIO
from pathlib import Path

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase

from restoration.imaging import load_pgm
from restoration.management.commands.restore import restore_config
from restoration.models import ExperimentRun, RunCheckpoint
from restoration.services.trace_csv import read_trace_csv


class BenchCommandMixin:
    def setUp(self):
        super().setUp()
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)
        self.original = self.dir / "phantom.pgm"
        self.degraded = self.dir / "degraded.pgm"
        self.call("make_phantom", size=16, output=str(self.original))
        self.call(
            "degrade",
            input=str(self.original),
            output=str(self.degraded),
            kernel="gaussian:5,1",
            noise_sigma="0.01",
            seed="7",
        )

    def tearDown(self):
        self.tmp.cleanup()
        super().tearDown()

    def call(self, name, **options):
        out = StringIO()
        call_command(name, stdout=out, stderr=StringIO(), verbosity=0, **options)
        return out.getvalue()

    def assertExitCode(self, code, name, **options):
        with self.assertRaises(CommandError) as cm:
            self.call(name, **options)
        self.assertEqual(cm.exception.returncode, code)
        return cm.exception


class DegradeCommandTests(BenchCommandMixin, SimpleTestCase):
    def test_writes_image_and_sidecar(self):
        img = load_pgm(self.degraded)
        self.assertEqual((img.width, img.height), (16, 16))
        meta = json.loads((self.dir / "degraded.pgm.json").read_text())
        self.assertEqual(meta["kernel"], "gaussian:5,1")
        self.assertEqual(meta["noise_sigma"], 0.01)
        self.assertEqual(meta["seed"], 7)
        self.assertEqual((meta["width"], meta["height"]), (16, 16))
        # normalized nonnegative kernel: ||A|| = 1
        self.assertAlmostEqual(meta["lipschitz"], 1.0, places=6)

    def test_rerun_is_byte_identical(self):
        again = self.dir / "again.pgm"
        self.call(
            "degrade",
            input=str(self.original),
            output=str(again),
            kernel="gaussian:5,1",
            noise_sigma="0.01",
            seed="7",
        )
        self.assertEqual(again.read_bytes(), self.degraded.read_bytes())

    def test_seed_changes_noise(self):
        other = self.dir / "other.pgm"
        self.call("degrade", input=str(self.original), output=str(other), kernel="gaussian:5,1",
                  noise_sigma="0.01", seed="8")
        self.assertNotEqual(other.read_bytes(), self.degraded.read_bytes())

    def test_plain_output(self):
        plain = self.dir / "plain.pgm"
        self.call("degrade", input=str(self.original), output=str(plain), kernel="gaussian:5,1",
                  noise_sigma="0.01", seed="7", plain=True)
        self.assertTrue(plain.read_bytes().startswith(b"P2\n16 16\n255\n"))
        np.testing.assert_array_equal(load_pgm(plain).pixels, load_pgm(self.degraded).pixels)

    def test_even_kernel_is_usage_error(self):
        out = self.dir / "bad.pgm"
        self.assertExitCode(2, "degrade", input=str(self.original), output=str(out), kernel="gaussian:4,2")
        self.assertFalse(out.exists())

    def test_kernel_larger_than_image(self):
        self.assertExitCode(2, "degrade", input=str(self.original), output=str(self.dir / "x.pgm"),
                            kernel="gaussian:17,3")

    def test_missing_input_is_io_error(self):
        self.assertExitCode(3, "degrade", input=str(self.dir / "nope.pgm"), output=str(self.dir / "x.pgm"))

    def test_bad_number(self):
        self.assertExitCode(2, "degrade", input=str(self.original), output=str(self.dir / "x.pgm"),
                            noise_sigma="lots")

    def test_config_file(self):
        conf = self.dir / "bench.conf"
        conf.write_text("kernel = gaussian:5,1\nnoise-sigma = 0.01\nseed = 7\n")
        out = self.dir / "from_conf.pgm"
        self.call("degrade", input=str(self.original), output=str(out), config_file=str(conf))
        self.assertEqual(out.read_bytes(), self.degraded.read_bytes())


class RestoreCommandTests(BenchCommandMixin, SimpleTestCase):
    def restore(self, **options):
        options.setdefault("input", str(self.degraded))
        options.setdefault("original", str(self.original))
        return self.call("restore", **options)

    def test_trace_and_output(self):
        out, trace = self.dir / "restored.pgm", self.dir / "trace.csv"
        stdout = self.restore(output=str(out), trace=str(trace), iters="20", algorithms="new")
        rows = read_trace_csv(trace)
        self.assertEqual([r.iter for r in rows], list(range(21)))
        self.assertEqual(rows[0].elapsed_s, 0.0)
        self.assertTrue(all(np.isfinite(r.snr_db) for r in rows))
        self.assertGreater(rows[-1].snr_db, rows[0].snr_db)
        self.assertIn("new: 20 iterations", stdout)
        self.assertEqual(load_pgm(out).shape, (16, 16))

    def test_zero_iterations_returns_degraded(self):
        out, trace = self.dir / "restored.pgm", self.dir / "trace.csv"
        self.restore(output=str(out), trace=str(trace), iters="0")
        self.assertEqual(out.read_bytes(), self.degraded.read_bytes())
        self.assertEqual([r.iter for r in read_trace_csv(trace)], [0])

    def test_missing_original_is_usage_error(self):
        self.assertExitCode(2, "restore", input=str(self.degraded), iters="5")

    def test_missing_input_file_is_io_error(self):
        self.assertExitCode(3, "restore", input=str(self.dir / "gone.pgm"), original=str(self.original), iters="5")

    def test_size_mismatch(self):
        big = self.dir / "big.pgm"
        self.call("make_phantom", size=32, output=str(big))
        self.assertExitCode(2, "restore", input=str(self.degraded), original=str(big), iters="5")

    def test_one_algorithm_only(self):
        self.assertExitCode(2, "restore", input=str(self.degraded), original=str(self.original),
                            iters="5", algorithms="fbs,new")

    def test_invalid_parameters_fail_before_running(self):
        trace = self.dir / "trace.csv"
        err = self.assertExitCode(2, "restore", input=str(self.degraded), original=str(self.original),
                                  iters="5", algorithms="apfbnsm", lam="1.5", trace=str(trace))
        self.assertIn("lambda", str(err))
        self.assertFalse(trace.exists())

    def test_sidecar_lipschitz_follows_kernel(self):
        stored = json.loads((self.dir / "degraded.pgm.json").read_text())["lipschitz"]
        same = restore_config({"input": str(self.degraded), "iters": "5"}, "restore")
        self.assertEqual(same.kernel, "gaussian:5,1")
        self.assertEqual(same.lipschitz, stored)
        other = restore_config({"input": str(self.degraded), "iters": "5", "kernel": "motion:5,0"}, "restore")
        self.assertIsNone(other.lipschitz)


class CompareCommandTests(BenchCommandMixin, SimpleTestCase):
    def compare(self, **options):
        options.setdefault("input", str(self.degraded))
        options.setdefault("original", str(self.original))
        options.setdefault("checkpoints", "1,5,10")
        return self.call("compare", **options)

    def test_table_and_traces(self):
        table, traces = self.dir / "table.csv", self.dir / "traces"
        traces.mkdir()
        stdout = self.compare(table=str(table), trace_dir=str(traces), algorithms="fbs,lorenz-pock,new")
        lines = table.read_text().splitlines()
        self.assertEqual(lines[0], "iter,fbs,lorenz-pock,new")
        self.assertEqual([line.split(",")[0] for line in lines[1:]], ["1", "5", "10"])
        self.assertTrue(all(cell for line in lines[1:] for cell in line.split(",")))
        self.assertIn("iter,fbs,lorenz-pock,new", stdout)
        for alg in ("fbs", "lorenz-pock", "new"):
            rows = read_trace_csv(traces / f"{alg}.csv")
            self.assertEqual(rows[-1].iter, 10)
        # every algorithm starts from the same degraded image
        starts = {read_trace_csv(traces / f"{a}.csv")[0].snr_db for a in ("fbs", "lorenz-pock", "new")}
        self.assertEqual(len(starts), 1)

    def test_default_algorithms(self):
        table = self.dir / "table.csv"
        self.compare(table=str(table))
        self.assertEqual(table.read_text().splitlines()[0], "iter,lorenz-pock,apfbnsm,new")

    def test_traces_default_to_table_directory(self):
        out = self.dir / "out"
        out.mkdir()
        self.compare(table=str(out / "table.csv"))
        for alg in ("lorenz-pock", "apfbnsm", "new"):
            self.assertEqual(read_trace_csv(out / f"{alg}.csv")[-1].iter, 10)

    def test_rerun_and_workers_give_the_same_table(self):
        first, second = self.dir / "a.csv", self.dir / "b.csv"
        self.compare(table=str(first))
        self.compare(table=str(second), workers="3")
        self.assertEqual(first.read_bytes(), second.read_bytes())

    def test_single_algorithm_is_usage_error(self):
        self.assertExitCode(2, "compare", input=str(self.degraded), original=str(self.original),
                            table=str(self.dir / "t.csv"), algorithms="new", checkpoints="1,5")

    def test_table_required(self):
        self.assertExitCode(2, "compare", input=str(self.degraded), original=str(self.original), checkpoints="1,5")

    def test_checkpoint_beyond_iters(self):
        self.assertExitCode(2, "compare", input=str(self.degraded), original=str(self.original),
                            table=str(self.dir / "t.csv"), checkpoints="1,50", iters="10")


class LassoDemoCommandTests(SimpleTestCase):
    def call(self, **options):
        out = StringIO()
        call_command("lasso_demo", stdout=out, stderr=StringIO(), verbosity=0, **options)
        return out.getvalue()

    def report_rows(self, stdout):
        lines = [line for line in stdout.splitlines() if "," in line]
        self.assertEqual(
            lines[0], "algorithm,iterations,kkt_residual,fixed_point_residual,distance_to_reference,passed"
        )
        return [line.split(",") for line in lines[1:]]

    def test_zero_truth_without_noise(self):
        rows = self.report_rows(self.call(dimension="8", sparsity="0", noise_sigma="0", iters="10"))
        self.assertEqual([r[0] for r in rows], ["fbs", "moudafi-oliny", "lorenz-pock", "apfbnsm", "new"])
        for r in rows:
            self.assertEqual(float(r[2]), 0.0)
            self.assertEqual(float(r[4]), 0.0)
            self.assertEqual(r[5], "yes")

    def test_large_rho_keeps_zero(self):
        rows = self.report_rows(self.call(dimension="2", sparsity="1", rho="100", iters="5"))
        self.assertTrue(all(r[5] == "yes" and float(r[4]) == 0.0 for r in rows))

    def test_small_instance_converges(self):
        rows = self.report_rows(
            self.call(dimension="10", sparsity="2", iters="10000", reference_iters="50000",
                      algorithms="fbs,new")
        )
        self.assertEqual([r[5] for r in rows], ["yes", "yes"])

    def test_missed_target_exits_one(self):
        with self.assertRaises(CommandError) as cm:
            self.call(dimension="10", sparsity="3", iters="1", kkt_target="1e-12", algorithms="fbs")
        self.assertEqual(cm.exception.returncode, 1)

    def test_bad_dimension(self):
        with self.assertRaises(CommandError) as cm:
            self.call(dimension="1")
        self.assertEqual(cm.exception.returncode, 2)
        with self.assertRaises(CommandError) as cm:
            self.call(dimension="ten")
        self.assertEqual(cm.exception.returncode, 2)


class RecordedRunTests(BenchCommandMixin, TestCase):
    def test_restore_record(self):
        self.call("restore", input=str(self.degraded), original=str(self.original),
                  checkpoints="1,5", iters="6", record=True)
        run = ExperimentRun.objects.get(kind=ExperimentRun.Kind.RESTORE)
        self.assertEqual(run.status, ExperimentRun.Status.FINISHED)
        self.assertEqual(run.algorithms, ["new"])
        self.assertEqual(run.summary["iterations"], 6)
        self.assertIsNotNone(run.lipschitz)
        self.assertEqual(
            list(run.checkpoints.order_by("iteration").values_list("iteration", flat=True)), [1, 5]
        )

    def test_compare_record(self):
        self.call("compare", input=str(self.degraded), original=str(self.original), checkpoints="1,5",
                  table=str(self.dir / "t.csv"), algorithms="fbs,new", record=True)
        run = ExperimentRun.objects.get(kind=ExperimentRun.Kind.COMPARE)
        self.assertEqual(RunCheckpoint.objects.filter(run=run).count(), 4)
        self.assertEqual(run.summary["table"]["checkpoints"], [1, 5])

    def test_failed_run_is_marked(self):
        with self.assertRaises(CommandError):
            self.call("restore", input=str(self.degraded), iters="5", record=True)
        run = ExperimentRun.objects.get()
        self.assertEqual(run.status, ExperimentRun.Status.FAILED)
        self.assertIn("--original", run.error)

    def test_without_record_nothing_is_stored(self):
        self.call("restore", input=str(self.degraded), original=str(self.original), iters="3")
        self.assertFalse(ExperimentRun.objects.exists())
