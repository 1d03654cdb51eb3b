"""Simulation models, evaluation metrics and the Monte-Carlo runner."""

from .experiment import Cell, ExperimentReport, default_workers, reports_to_csv, reports_to_json, run_experiment, run_replica
from .metrics import ScreeningSummary, eu_metric, re_metric, screening_metrics
from .models import FAMILIES, ModelSpec, TrueModel, build_sigma, sample

__all__ = [
    "Cell",
    "ExperimentReport",
    "FAMILIES",
    "ModelSpec",
    "ScreeningSummary",
    "TrueModel",
    "build_sigma",
    "default_workers",
    "eu_metric",
    "re_metric",
    "reports_to_csv",
    "reports_to_json",
    "run_experiment",
    "run_replica",
    "sample",
    "screening_metrics",
]
