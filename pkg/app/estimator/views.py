"""
Views for the estimator APIs.
"""

from django.conf import settings

from drf_spectacular.utils import extend_schema

from core.views import ComputeView
from estimator import serializers
from estimator.services import run_estimator


class EstimatorView(ComputeView):
    """Mean, variance and variance-optimal reweighting of the estimator."""

    request_serializer_class = serializers.EstimatorRequestSerializer
    response_serializer_class = serializers.EstimatorResultSerializer

    @extend_schema(
        request=serializers.EstimatorRequestSerializer,
        responses=serializers.EstimatorResultSerializer,
    )
    def post(self, request):
        return super().post(request)

    def compute(self, data):
        return run_estimator(data, seed=settings.ALLOCPLAN_SEED)
