"""
Core views for allocplan.
"""

from rest_framework import status
from rest_framework.decorators import api_view
from rest_framework.response import Response
from rest_framework.views import APIView

from core.exceptions import AllocplanError


@api_view(["GET"])
def health_check(request):
    """Returns successful response."""

    return Response({"healthy": True})


class ComputeView(APIView):
    """Base for stateless POST endpoints.

    Subclasses name a request serializer, a response serializer and a
    compute(validated_data) function returning the response payload.
    """

    request_serializer_class = None
    response_serializer_class = None

    def compute(self, data):
        raise NotImplementedError

    def post(self, request):
        serializer = self.request_serializer_class(data=request.data)
        if not serializer.is_valid():
            return Response(
                serializer.errors, status=status.HTTP_400_BAD_REQUEST
            )

        try:
            payload = self.compute(serializer.validated_data)
        except AllocplanError as exc:
            return Response(
                {"detail": str(exc)}, status=status.HTTP_400_BAD_REQUEST
            )

        return Response(
            self.response_serializer_class(payload).data,
            status=status.HTTP_200_OK,
        )
