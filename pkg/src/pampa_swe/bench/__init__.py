"""Benchmark harness: presets, configs, error norms and the ``pampa-bench`` CLI."""

from .config import ConfigError, ExperimentConfig, evaluate_expression
from .norms import ErrorReport, error_norms, rates, restrict
from .presets import PRESETS
from .runner import ExperimentResult, convergence_study, prolong, run_experiment

__all__ = ["ConfigError", "ExperimentConfig", "evaluate_expression", "ErrorReport", "error_norms",
           "rates", "restrict", "PRESETS", "ExperimentResult", "convergence_study", "prolong",
           "run_experiment"]
