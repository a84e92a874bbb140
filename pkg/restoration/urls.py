"""
restoration/urls.py

Read-only API over runs stored with --record.
"""

from django.urls import path

from .views import RunDetailView, RunListView, RunTableView

urlpatterns = [
    path("runs/", RunListView.as_view(), name="run-list"),
    path("runs/<int:run_id>/", RunDetailView.as_view(), name="run-detail"),
    path("runs/<int:run_id>/table/", RunTableView.as_view(), name="run-table"),
]
