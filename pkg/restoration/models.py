from django.db import models


# ==========================
# BENCH RUNS (--record)
# ==========================

class ExperimentRun(models.Model):
    """
    One bench command invocation. Only checkpoint rows are kept; the full
    per-iteration traces live in the CSV files.
    """

    class Kind(models.TextChoices):
        DEGRADE = "degrade", "Degrade"
        RESTORE = "restore", "Restore"
        COMPARE = "compare", "Compare"
        LASSO_DEMO = "lasso_demo", "Lasso demo"

    class Status(models.TextChoices):
        RUNNING = "running", "Running"
        FINISHED = "finished", "Finished"
        FAILED = "failed", "Failed"

    kind = models.CharField(max_length=20, choices=Kind.choices)
    status = models.CharField(max_length=20, choices=Status.choices, default=Status.RUNNING)
    algorithms = models.JSONField(default=list, blank=True)
    config = models.JSONField(default=dict, blank=True)
    lipschitz = models.FloatField(null=True, blank=True)
    summary = models.JSONField(default=dict, blank=True)
    error = models.TextField(blank=True)

    created_at = models.DateTimeField(auto_now_add=True)
    finished_at = models.DateTimeField(null=True, blank=True)

    class Meta:
        db_table = "experiment_runs"
        ordering = ["-created_at", "-id"]
        indexes = [
            models.Index(fields=["kind", "created_at"], name="experiment_kind_created_idx"),
        ]

    def __str__(self) -> str:
        return f"{self.kind} #{self.pk} ({self.status})"


class RunCheckpoint(models.Model):
    run = models.ForeignKey(ExperimentRun, on_delete=models.CASCADE, related_name="checkpoints")
    algorithm = models.CharField(max_length=20)
    iteration = models.PositiveIntegerField()
    # null when the estimate equals the original exactly (infinite SNR)
    snr_db = models.FloatField(null=True, blank=True)
    objective = models.FloatField()
    residual_m_norm = models.FloatField()
    elapsed_s = models.FloatField(default=0.0)

    class Meta:
        db_table = "run_checkpoints"
        ordering = ["run_id", "iteration", "id"]
        constraints = [
            models.UniqueConstraint(
                fields=["run", "algorithm", "iteration"],
                name="uniq_checkpoint_per_algorithm",
            ),
        ]

    def __str__(self) -> str:
        return f"{self.algorithm}@{self.iteration} (run {self.run_id})"
