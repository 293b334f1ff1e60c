"""
Views for the allocation APIs.
"""

from drf_spectacular.utils import extend_schema

from core.views import ComputeView
from allocation import serializers
from allocation.services import run_optimize


class OptimizeView(ComputeView):
    """Optimal allocation for a scaling model and population."""

    request_serializer_class = serializers.OptimizeRequestSerializer
    response_serializer_class = serializers.AllocationResultSerializer

    @extend_schema(
        request=serializers.OptimizeRequestSerializer,
        responses=serializers.AllocationResultSerializer,
    )
    def post(self, request):
        return super().post(request)

    def compute(self, data):
        return run_optimize(data)
