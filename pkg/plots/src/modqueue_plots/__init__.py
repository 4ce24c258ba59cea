"""Figure rendering for the moderation-queue simulator's CSV outputs."""

from .data import PlotInputError, load_mods, load_trials
from .figures import (
    pct_label,
    plot_efficiency,
    plot_toxicity_heatmaps,
    plot_workload,
    toxic_pct_matrix,
)

__all__ = [
    "PlotInputError",
    "load_mods",
    "load_trials",
    "pct_label",
    "plot_efficiency",
    "plot_toxicity_heatmaps",
    "plot_workload",
    "toxic_pct_matrix",
]
