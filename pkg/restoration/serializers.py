from rest_framework import serializers

from .models import ExperimentRun, RunCheckpoint


class RunCheckpointSerializer(serializers.ModelSerializer):
    class Meta:
        model = RunCheckpoint
        fields = (
            "algorithm",
            "iteration",
            "snr_db",
            "objective",
            "residual_m_norm",
            "elapsed_s",
        )


class ExperimentRunListSerializer(serializers.ModelSerializer):
    checkpoint_count = serializers.IntegerField(read_only=True)

    class Meta:
        model = ExperimentRun
        fields = (
            "id",
            "kind",
            "status",
            "algorithms",
            "lipschitz",
            "checkpoint_count",
            "created_at",
            "finished_at",
        )


class ExperimentRunDetailSerializer(serializers.ModelSerializer):
    checkpoints = RunCheckpointSerializer(many=True, read_only=True)

    class Meta:
        model = ExperimentRun
        fields = (
            "id",
            "kind",
            "status",
            "algorithms",
            "config",
            "lipschitz",
            "summary",
            "error",
            "created_at",
            "finished_at",
            "checkpoints",
        )
