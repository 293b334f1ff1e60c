"""
Views for the scaling APIs.
"""

from django.conf import settings

from drf_spectacular.utils import extend_schema

from core.views import ComputeView
from scaling import serializers
from scaling.fitting import LossObservation
from scaling.services import run_fit


class FitView(ComputeView):
    """Per-group scaling-law fits for a list of observations."""

    request_serializer_class = serializers.FitRequestSerializer
    response_serializer_class = serializers.FitReportSerializer

    @extend_schema(
        request=serializers.FitRequestSerializer,
        responses=serializers.FitReportSerializer,
    )
    def post(self, request):
        return super().post(request)

    def compute(self, data):
        observations = [
            LossObservation(**record) for record in data["observations"]
        ]
        return run_fit(
            observations,
            group=data.get("group"),
            m_min=data["m_min"],
            starts=data["starts"],
            seed=data.get("seed", settings.ALLOCPLAN_SEED),
        )
