from django.db.models import Count
from rest_framework import permissions, status
from rest_framework.exceptions import ParseError
from rest_framework.renderers import JSONRenderer
from rest_framework.response import Response
from rest_framework.views import APIView

from .models import ExperimentRun
from .serializers import ExperimentRunDetailSerializer, ExperimentRunListSerializer
from .services.recording import snr_table

MAX_PAGE_SIZE = 200


class RunAPIView(APIView):
    permission_classes = [permissions.IsAuthenticated]
    renderer_classes = [JSONRenderer]

    @staticmethod
    def _parse_int_query_param(request, key: str, default: int) -> int:
        raw_value = request.query_params.get(key)
        if raw_value in (None, ""):
            return default
        try:
            return int(raw_value)
        except (TypeError, ValueError):
            raise ParseError(f"Invalid query param '{key}': expected an integer.")

    @staticmethod
    def _get_run(run_id: int):
        return ExperimentRun.objects.filter(id=run_id).first()


class RunListView(RunAPIView):
    def get(self, request):
        limit = self._parse_int_query_param(request, "limit", 50)
        if not 1 <= limit <= MAX_PAGE_SIZE:
            raise ParseError(f"Invalid query param 'limit': expected 1..{MAX_PAGE_SIZE}.")
        runs = ExperimentRun.objects.annotate(checkpoint_count=Count("checkpoints"))

        kind = request.query_params.get("kind")
        if kind:
            if kind not in ExperimentRun.Kind.values:
                raise ParseError(f"Invalid query param 'kind': expected one of {', '.join(ExperimentRun.Kind.values)}.")
            runs = runs.filter(kind=kind)

        data = ExperimentRunListSerializer(runs.order_by("-created_at", "-id")[:limit], many=True).data
        return Response({"results": data}, status=status.HTTP_200_OK)


class RunDetailView(RunAPIView):
    def get(self, request, run_id: int):
        run = self._get_run(run_id)
        if not run:
            return Response({"detail": "Run not found"}, status=status.HTTP_404_NOT_FOUND)
        return Response(ExperimentRunDetailSerializer(run).data, status=status.HTTP_200_OK)


class RunTableView(RunAPIView):
    def get(self, request, run_id: int):
        run = self._get_run(run_id)
        if not run:
            return Response({"detail": "Run not found"}, status=status.HTTP_404_NOT_FOUND)
        if run.kind not in (ExperimentRun.Kind.RESTORE, ExperimentRun.Kind.COMPARE):
            return Response(
                {"detail": f"{run.kind} runs have no SNR table"},
                status=status.HTTP_400_BAD_REQUEST,
            )
        return Response({"run": run.id, **snr_table(run)}, status=status.HTTP_200_OK)
