"""Deterministic agent-based simulator of a shared moderation queue."""

from .core import (
    BernoulliZeroOne,
    ConfigError,
    ExperimentConfig,
    ExplicitToxicity,
    ModqueueView,
    Moderator,
    Report,
    SelectionStrategy,
    TopTwo,
    ToxicityModel,
    Uniform,
    ViewPolicy,
    config_from_dict,
    config_to_dict,
    config_violations,
    make_reports,
    validate_config,
)
from .engine import Busy, SimulationState, TrialResult, run_trial
from .experiments import (
    ComparisonTable,
    ExperimentSummary,
    baseline_preset,
    compare_interventions,
    run_experiment,
    sweep_awareness,
)
from .metrics import (
    OptimalValues,
    longest_toxic_run,
    optimal_values,
    percent_vs_optimal,
    team_dispersion,
)
from .views import (
    assign_views,
    default_views,
    distribute_toxicity,
    random_views,
    reverse_split_views,
)

__all__ = [
    "BernoulliZeroOne",
    "Busy",
    "ComparisonTable",
    "ConfigError",
    "ExperimentConfig",
    "ExperimentSummary",
    "ExplicitToxicity",
    "ModqueueView",
    "Moderator",
    "OptimalValues",
    "Report",
    "SelectionStrategy",
    "SimulationState",
    "TopTwo",
    "ToxicityModel",
    "TrialResult",
    "Uniform",
    "ViewPolicy",
    "assign_views",
    "baseline_preset",
    "compare_interventions",
    "config_from_dict",
    "config_to_dict",
    "config_violations",
    "default_views",
    "distribute_toxicity",
    "longest_toxic_run",
    "make_reports",
    "optimal_values",
    "percent_vs_optimal",
    "random_views",
    "reverse_split_views",
    "run_experiment",
    "run_trial",
    "sweep_awareness",
    "team_dispersion",
    "validate_config",
]
