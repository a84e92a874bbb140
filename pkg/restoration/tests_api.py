from django.contrib.auth import get_user_model
from django.test import TestCase
from rest_framework import status
from rest_framework.test import APIClient

from restoration.models import ExperimentRun
from restoration.services.recording import fail_run, finish_run, json_safe, snr_table, start_run
from restoration.services.trace_csv import TraceRow


User = get_user_model()


def _rows(*snrs):
    return [TraceRow(i, snr, 1.0 / (i + 1), 0.1 / (i + 1), 0.01 * i) for i, snr in enumerate(snrs)]


class RecordingTests(TestCase):
    def test_json_safe(self):
        self.assertEqual(
            json_safe({"a": float("inf"), "b": [1.5, float("nan")], "c": "x"}),
            {"a": None, "b": [1.5, None], "c": "x"},
        )

    def test_finish_keeps_only_checkpoints(self):
        run = start_run("compare", {"iters": 3}, ["fbs", "new"])
        finish_run(
            run,
            summary={"ok": True},
            lipschitz=1.0,
            traces={"fbs": _rows(10.0, 11.0, 12.0, 13.0), "new": _rows(10.0, 12.0, float("inf"), 14.0)},
            checkpoints=[1, 2],
        )
        run.refresh_from_db()
        self.assertEqual(run.status, ExperimentRun.Status.FINISHED)
        self.assertIsNotNone(run.finished_at)
        self.assertEqual(run.checkpoints.count(), 4)
        self.assertEqual(
            snr_table(run),
            {"columns": ["iter", "fbs", "new"], "rows": [[1, 11.0, 12.0], [2, 12.0, None]]},
        )

    def test_fail_run(self):
        run = fail_run(start_run("degrade", {}), "boom")
        run.refresh_from_db()
        self.assertEqual((run.status, run.error), (ExperimentRun.Status.FAILED, "boom"))


class RunApiTests(TestCase):
    def setUp(self):
        self.client = APIClient()
        self.user = User.objects.create_user(username="bench", email="bench@example.com", password="pass12345")
        self.compare = start_run("compare", {"iters": 2}, ["lorenz-pock", "new"])
        finish_run(
            self.compare,
            lipschitz=0.98,
            traces={"lorenz-pock": _rows(9.0, 10.0, 11.0), "new": _rows(9.0, 10.5, 11.5)},
            checkpoints=[1, 2],
        )
        self.degrade = start_run("degrade", {"kernel": "gaussian:9,4"})
        finish_run(self.degrade, summary={"width": 64}, lipschitz=1.0)

    def test_anonymous_is_rejected(self):
        response = self.client.get("/api/restoration/runs/", format="json")
        self.assertIn(response.status_code, (status.HTTP_401_UNAUTHORIZED, status.HTTP_403_FORBIDDEN))

    def test_list(self):
        self.client.force_authenticate(user=self.user)
        response = self.client.get("/api/restoration/runs/", format="json")
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        results = response.json()["results"]
        self.assertEqual([r["id"] for r in results], [self.degrade.id, self.compare.id])
        self.assertEqual(results[1]["checkpoint_count"], 4)

    def test_list_filters(self):
        self.client.force_authenticate(user=self.user)
        response = self.client.get("/api/restoration/runs/?kind=compare&limit=5", format="json")
        self.assertEqual([r["kind"] for r in response.json()["results"]], ["compare"])
        response = self.client.get("/api/restoration/runs/?limit=1", format="json")
        self.assertEqual(len(response.json()["results"]), 1)

    def test_list_bad_params(self):
        self.client.force_authenticate(user=self.user)
        for query in ("limit=0", "limit=201", "limit=abc", "kind=bogus"):
            response = self.client.get(f"/api/restoration/runs/?{query}", format="json")
            self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST, query)

    def test_detail(self):
        self.client.force_authenticate(user=self.user)
        response = self.client.get(f"/api/restoration/runs/{self.compare.id}/", format="json")
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        body = response.json()
        self.assertEqual(body["status"], "finished")
        self.assertEqual(body["lipschitz"], 0.98)
        self.assertEqual(len(body["checkpoints"]), 4)
        self.assertEqual(body["checkpoints"][0]["iteration"], 1)

    def test_detail_missing(self):
        self.client.force_authenticate(user=self.user)
        response = self.client.get("/api/restoration/runs/99999/", format="json")
        self.assertEqual(response.status_code, status.HTTP_404_NOT_FOUND)
        self.assertEqual(response.json(), {"detail": "Run not found"})

    def test_table(self):
        self.client.force_authenticate(user=self.user)
        response = self.client.get(f"/api/restoration/runs/{self.compare.id}/table/", format="json")
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(
            response.json(),
            {
                "run": self.compare.id,
                "columns": ["iter", "lorenz-pock", "new"],
                "rows": [[1, 10.0, 10.5], [2, 11.0, 11.5]],
            },
        )

    def test_table_for_degrade_run(self):
        self.client.force_authenticate(user=self.user)
        response = self.client.get(f"/api/restoration/runs/{self.degrade.id}/table/", format="json")
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
        response = self.client.get("/api/restoration/runs/99999/table/", format="json")
        self.assertEqual(response.status_code, status.HTTP_404_NOT_FOUND)
