"""
URL mappings for the allocation app.
"""

from django.urls import path

from allocation import views


app_name = 'allocation'

urlpatterns = [
    path('optimize/', views.OptimizeView.as_view(), name='optimize'),
]
