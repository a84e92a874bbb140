from django.contrib import admin

from .models import ExperimentRun, RunCheckpoint


class RunCheckpointInline(admin.TabularInline):
    model = RunCheckpoint
    extra = 0
    readonly_fields = ("algorithm", "iteration", "snr_db", "objective", "residual_m_norm", "elapsed_s")


@admin.register(ExperimentRun)
class ExperimentRunAdmin(admin.ModelAdmin):
    list_display = ("id", "kind", "status", "created_at", "finished_at")
    list_filter = ("kind", "status")
    readonly_fields = ("created_at", "finished_at")
    inlines = [RunCheckpointInline]


@admin.register(RunCheckpoint)
class RunCheckpointAdmin(admin.ModelAdmin):
    list_display = ("run", "algorithm", "iteration", "snr_db", "residual_m_norm")
    list_filter = ("algorithm",)
