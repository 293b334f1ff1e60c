"""
URL mappings for the scaling app.
"""

from django.urls import path

from scaling import views


app_name = 'scaling'

urlpatterns = [
    path('fit/', views.FitView.as_view(), name='fit'),
]
