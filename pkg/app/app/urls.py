"""allocplan URL Configuration

The HTTP surface mirrors the command-line tools: every route is a stateless
computation, plus the health check and the generated OpenAPI schema that
publishes the JSON output shapes.
"""
from drf_spectacular.views import (
    SpectacularAPIView,
    SpectacularSwaggerView,
)
from django.urls import path, include

from core import views as core_views

urlpatterns = [
    path("api/health-check", core_views.health_check, name="health-check"),
    path("api/schema", SpectacularAPIView.as_view(), name="api-schema"),
    path(
        "api/docs",
        SpectacularSwaggerView.as_view(url_name="api-schema"),
        name="api-docs",
    ),
    path("api/allocation/", include("allocation.urls")),
    path("api/estimator/", include("estimator.urls")),
    path("api/scaling/", include("scaling.urls")),
]
