"""
URL mappings for the estimator app.
"""

from django.urls import path

from estimator import views


app_name = 'estimator'

urlpatterns = [
    path('analyze/', views.EstimatorView.as_view(), name='analyze'),
]
