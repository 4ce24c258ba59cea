"""CSV loading and schema checks for the simulator's result files.

This package consumes only the flat trials.csv / mods.csv formats; the
required column sets below mirror the simulator's published schemas.
"""

from __future__ import annotations

from pathlib import Path

import pandas as pd

TRIALS_COLUMNS = (
    "schema_version",
    "setting",
    "team_size",
    "trial",
    "seed",
    "completion_time",
    "collisions",
    "optimal_lb",
    "optimal_achievable",
)

MODS_COLUMNS = (
    "schema_version",
    "setting",
    "team_size",
    "trial",
    "mod_id",
    "work_time",
    "redundant_time",
    "reports_seen",
    "reports_completed",
    "toxic_seen",
    "toxic_completed",
    "longest_toxic_run",
)


class PlotInputError(ValueError):
    """Bad or unusable input file; the CLI maps this to a nonzero exit."""


def _load(path: str | Path, required: tuple[str, ...]) -> pd.DataFrame:
    frame = pd.read_csv(path)
    missing = [c for c in required if c not in frame.columns]
    if missing:
        raise PlotInputError(f"{path}: missing column(s): {', '.join(missing)}")
    if frame.empty:
        raise PlotInputError(f"{path}: no rows")
    return frame


def load_trials(path: str | Path) -> pd.DataFrame:
    return _load(path, TRIALS_COLUMNS)


def load_mods(path: str | Path) -> pd.DataFrame:
    return _load(path, MODS_COLUMNS)
