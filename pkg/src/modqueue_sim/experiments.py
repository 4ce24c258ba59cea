"""Experiment harness: trial batches across team sizes, aggregation, presets.

Seed discipline: the per-trial engine seed is ``derive_seed(master_seed,
SIM_STREAM, team_size, trial_index)``, view shuffles use their own stream,
and report toxicity is derived from (master_seed, trial_index) alone so
that changing the team size never perturbs which reports are toxic. All
three streams are published constants, so any trial can be reproduced from
the master seed.
"""

from __future__ import annotations

import hashlib
import json
import random
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Any, Callable, Iterable, Mapping, Optional, Sequence

from .core import (
    BernoulliZeroOne,
    ExperimentConfig,
    Moderator,
    TopTwo,
    ViewPolicy,
    config_to_dict,
    make_reports,
    validate_config,
)
from .engine import EventSink, TrialResult, run_trial
from .metrics import OptimalValues, optimal_values, team_dispersion
from .rng import derive_seed
from .views import assign_views

# Stream tags mixed into derive_seed; fixed forever for reproducibility.
REPORT_STREAM = 1
VIEW_STREAM = 2
SIM_STREAM = 3


def report_seed(master_seed: int, trial_index: int) -> int:
    """Toxicity stream seed; deliberately independent of team size."""
    return derive_seed(master_seed, REPORT_STREAM, trial_index)


def view_seed(master_seed: int, team_size: int, trial_index: int) -> int:
    return derive_seed(master_seed, VIEW_STREAM, team_size, trial_index)


def trial_seed(master_seed: int, team_size: int, trial_index: int) -> int:
    """Engine stream seed for one (team size, trial) cell coordinate."""
    return derive_seed(master_seed, SIM_STREAM, team_size, trial_index)


def baseline_preset() -> ExperimentConfig:
    """The synthetic baseline: 100 length-5 reports, teams 2..10, 100 trials.

    Identical default views, first-or-second selection at 0.6, no collision
    awareness, coin-flip 0/1 toxicity against a 0.5 threshold.
    """
    return ExperimentConfig(
        num_reports=100,
        report_length=5,
        team_sizes=tuple(range(2, 11)),
        trials=100,
        master_seed=0,
        view_policy=ViewPolicy.DEFAULT,
        distribute_toxicity=False,
        awareness=0.0,
        strategy=TopTwo(p_first=0.6),
        toxicity=BernoulliZeroOne(p_toxic=0.5),
        toxicity_threshold=0.5,
    )


class ExperimentError(RuntimeError):
    """Engine failure wrapped with its (team_size, trial) coordinate."""


@dataclass(frozen=True)
class TrialRecord:
    trial_index: int
    seed: int
    result: TrialResult


@dataclass(frozen=True)
class MetricStat:
    mean: float
    std: float


# Cell statistics, in stable output order. Values prefixed mean_/var_ are
# within-trial aggregates across the team, then summarized over trials.
STAT_KEYS = (
    "completion_time",
    "collisions",
    "mean_work_time",
    "mean_redundant_time",
    "mean_reports_seen",
    "mean_reports_completed",
    "var_reports_seen",
    "var_reports_completed",
    "mean_toxic_seen",
    "mean_toxic_completed",
    "mean_longest_toxic_run",
    "pct_completed_of_seen",
)


def trial_scalars(result: TrialResult) -> dict[str, float]:
    """Per-trial scalar metrics aggregated across the team."""
    k = len(result.work_time)
    seen_mean, seen_var = team_dispersion(result.reports_seen)
    completed_mean, completed_var = team_dispersion(result.reports_completed)
    ratios = [
        100.0 * c / s
        for c, s in zip(result.reports_completed, result.reports_seen)
        if s > 0
    ]
    return {
        "completion_time": float(result.completion_time),
        "collisions": float(result.collisions),
        "mean_work_time": sum(result.work_time) / k,
        "mean_redundant_time": sum(result.redundant_time) / k,
        "mean_reports_seen": seen_mean,
        "mean_reports_completed": completed_mean,
        "var_reports_seen": seen_var,
        "var_reports_completed": completed_var,
        "mean_toxic_seen": sum(result.toxic_seen) / k,
        "mean_toxic_completed": sum(result.toxic_completed) / k,
        "mean_longest_toxic_run": sum(result.longest_toxic_run) / k,
        "pct_completed_of_seen": sum(ratios) / len(ratios),
    }


@dataclass(frozen=True)
class CellSummary:
    team_size: int
    trials: int
    optimal: OptimalValues
    stats: dict[str, MetricStat]
    records: tuple[TrialRecord, ...]


@dataclass(frozen=True)
class ExperimentSummary:
    config: ExperimentConfig
    config_hash: str
    master_seed: int
    trials_per_cell: int
    cells: tuple[CellSummary, ...]

    def cell(self, team_size: int) -> CellSummary:
        for c in self.cells:
            if c.team_size == team_size:
                return c
        raise KeyError(f"no cell for team size {team_size}")

    def to_json_dict(self) -> dict[str, Any]:
        """Serializable form; raw trial records stay out of the document."""
        return {
            "schema_version": 1,
            "config": config_to_dict(self.config),
            "config_hash": self.config_hash,
            "master_seed": self.master_seed,
            "trials_per_cell": self.trials_per_cell,
            "std_convention": "population (ddof=0) over trials",
            "cells": [
                {
                    "team_size": c.team_size,
                    "trials": c.trials,
                    "optimal": {
                        "completion_time_lower_bound": c.optimal.completion_time_lower_bound,
                        "completion_time_achievable": c.optimal.completion_time_achievable,
                        "reports_per_mod": c.optimal.reports_per_mod,
                        "toxic_per_mod": c.optimal.toxic_per_mod,
                        "collisions": c.optimal.collisions,
                    },
                    "stats": {
                        key: {"mean": c.stats[key].mean, "std": c.stats[key].std}
                        for key in STAT_KEYS
                    },
                }
                for c in self.cells
            ],
        }


def config_hash(config: ExperimentConfig) -> str:
    doc = json.dumps(config_to_dict(config), sort_keys=True).encode()
    return hashlib.sha256(doc).hexdigest()


def build_trial(
    config: ExperimentConfig, team_size: int, trial_index: int
) -> tuple[tuple, list[Moderator], int]:
    """Construct one trial's (reports, mods, engine seed) from the config streams."""
    reports = make_reports(config, random.Random(report_seed(config.master_seed, trial_index)))
    views = assign_views(
        config.view_policy,
        team_size,
        reports,
        config.distribute_toxicity,
        config.toxicity_threshold,
        random.Random(view_seed(config.master_seed, team_size, trial_index)),
    )
    mods = [
        Moderator(
            id=i,
            view=views[i],
            strategy=config.strategy,
            awareness=config.awareness,
            toxicity_threshold=config.toxicity_threshold,
        )
        for i in range(team_size)
    ]
    return reports, mods, trial_seed(config.master_seed, team_size, trial_index)


def run_cell(
    config: ExperimentConfig,
    team_size: int,
    event_sink_factory: Optional[Callable[[int, int], EventSink]] = None,
) -> list[TrialRecord]:
    """Run all trials for one team size; ``event_sink_factory(team_size, trial)`` is optional."""
    records = []
    for t in range(config.trials):
        reports, mods, seed = build_trial(config, team_size, t)
        sink = event_sink_factory(team_size, t) if event_sink_factory else None
        try:
            result = run_trial(reports, mods, seed, event_sink=sink)
        except Exception as exc:
            raise ExperimentError(f"team_size={team_size} trial={t}: {exc}") from exc
        records.append(TrialRecord(trial_index=t, seed=seed, result=result))
    return records


def _summarize_cell(
    config: ExperimentConfig, team_size: int, records: list[TrialRecord]
) -> CellSummary:
    per_trial = [trial_scalars(rec.result) for rec in records]
    stats = {}
    for key in STAT_KEYS:
        values = [scalars[key] for scalars in per_trial]
        stats[key] = MetricStat(
            mean=statistics.fmean(values),
            std=statistics.pstdev(values),
        )
    # Optimal values: lengths are config-fixed; the toxic count varies with
    # each trial's draws, so report its across-trial mean.
    base = optimal_values(
        make_reports(config, random.Random(report_seed(config.master_seed, 0))),
        team_size,
        config.toxicity_threshold,
    )
    toxic_counts = []
    for rec in records:
        reports = make_reports(
            config, random.Random(report_seed(config.master_seed, rec.trial_index))
        )
        toxic_counts.append(
            sum(1 for r in reports if r.toxicity > config.toxicity_threshold)
        )
    optimal = OptimalValues(
        completion_time_lower_bound=base.completion_time_lower_bound,
        completion_time_achievable=base.completion_time_achievable,
        reports_per_mod=base.reports_per_mod,
        toxic_per_mod=statistics.fmean(toxic_counts) / team_size,
        collisions=0,
    )
    return CellSummary(
        team_size=team_size,
        trials=len(records),
        optimal=optimal,
        stats=stats,
        records=tuple(records),
    )


def _run_cell_task(args: tuple) -> tuple[int, list[TrialRecord]]:
    config, team_size = args
    return team_size, run_cell(config, team_size)


def run_experiment(
    config: ExperimentConfig,
    jobs: int = 1,
    event_sink_factory: Optional[Callable[[int, int], EventSink]] = None,
) -> ExperimentSummary:
    """Run every (team size, trial) cell and aggregate; deterministic given the config.

    Cells only depend on (master_seed, team_size, trial_index), never on
    their position in ``team_sizes``, and results are assembled in sorted
    cell order, so ``jobs > 1`` cannot change the output.
    """
    validate_config(config)
    team_sizes = list(config.team_sizes)
    if jobs > 1 and event_sink_factory is None and len(team_sizes) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            by_size = dict(pool.map(_run_cell_task, [(config, k) for k in team_sizes]))
    else:
        by_size = {k: run_cell(config, k, event_sink_factory) for k in team_sizes}
    cells = tuple(
        _summarize_cell(config, k, by_size[k]) for k in sorted(set(team_sizes))
    )
    return ExperimentSummary(
        config=config,
        config_hash=config_hash(config),
        master_seed=config.master_seed,
        trials_per_cell=config.trials,
        cells=cells,
    )


# --- Intervention comparisons ----------------------------------------------

# Metrics reported in comparison tables, in output order.
COMPARISON_METRICS = (
    "completion_time",
    "collisions",
    "mean_work_time",
    "mean_redundant_time",
    "mean_reports_seen",
    "mean_reports_completed",
    "pct_completed_of_seen",
    "mean_toxic_seen",
    "mean_toxic_completed",
    "mean_longest_toxic_run",
)

BASE_SETTING = "base"


@dataclass(frozen=True)
class ComparisonTable:
    """Cell means for a base setting and named variants, plus percent deltas.

    Two averaging conventions are retained: ``avg_pct_change`` averages the
    per-team-size percent changes with equal weight, while
    ``pct_change_of_avg`` compares the across-team-size mean values. Both
    appear in the CSV output so either can be inspected.
    """

    settings: tuple[str, ...]  # BASE_SETTING first, then variant names in order
    summaries: Mapping[str, ExperimentSummary]

    @property
    def team_sizes(self) -> tuple[int, ...]:
        return tuple(c.team_size for c in self.summaries[BASE_SETTING].cells)

    def mean(self, setting: str, team_size: int, metric: str) -> float:
        return self.summaries[setting].cell(team_size).stats[metric].mean

    def pct_change(self, setting: str, team_size: int, metric: str) -> Optional[float]:
        base = self.mean(BASE_SETTING, team_size, metric)
        value = self.mean(setting, team_size, metric)
        if base == 0:
            return 0.0 if value == 0 else None
        return 100.0 * (value - base) / base

    def avg_mean(self, setting: str, metric: str) -> float:
        return statistics.fmean(
            self.mean(setting, k, metric) for k in self.team_sizes
        )

    def avg_pct_change(self, setting: str, metric: str) -> Optional[float]:
        changes = [self.pct_change(setting, k, metric) for k in self.team_sizes]
        if any(c is None for c in changes):
            return None
        return statistics.fmean(changes)  # type: ignore[arg-type]

    def pct_change_of_avg(self, setting: str, metric: str) -> Optional[float]:
        base = self.avg_mean(BASE_SETTING, metric)
        value = self.avg_mean(setting, metric)
        if base == 0:
            return 0.0 if value == 0 else None
        return 100.0 * (value - base) / base


def compare_interventions(
    base: ExperimentConfig,
    variants: Mapping[str, ExperimentConfig],
    jobs: int = 1,
) -> ComparisonTable:
    """Run the base config and each named variant under the base's master seed."""
    validate_config(base)
    ordered = dict(variants)
    for name, cfg in ordered.items():
        validate_config(replace(cfg, master_seed=base.master_seed))
    summaries: dict[str, ExperimentSummary] = {
        BASE_SETTING: run_experiment(base, jobs=jobs)
    }
    for name, cfg in ordered.items():
        summaries[name] = run_experiment(
            replace(cfg, master_seed=base.master_seed), jobs=jobs
        )
    return ComparisonTable(
        settings=(BASE_SETTING, *ordered.keys()),
        summaries=summaries,
    )


def sweep_awareness(
    base: ExperimentConfig, levels: Sequence[float], jobs: int = 1
) -> ComparisonTable:
    """One variant per collision-awareness level; levels must lie in [0, 1]."""
    bad = [lvl for lvl in levels if not 0.0 <= lvl <= 1.0]
    if bad:
        raise ValueError(f"awareness level(s) out of [0,1]: {bad}")
    variants = {
        f"awareness={lvl:g}": replace(base, awareness=lvl) for lvl in levels
    }
    return compare_interventions(base, variants, jobs=jobs)


def apply_variant_spec(config: ExperimentConfig, spec: str) -> ExperimentConfig:
    """Apply a CLI variant spec: reverse, random, distribute-toxicity,
    awareness=<value>, composable with '+'."""
    out = config
    for part in spec.split("+"):
        part = part.strip()
        if part == "reverse":
            out = replace(out, view_policy=ViewPolicy.REVERSE)
        elif part == "random":
            out = replace(out, view_policy=ViewPolicy.RANDOM)
        elif part == "distribute-toxicity":
            out = replace(out, distribute_toxicity=True)
        elif part.startswith("awareness="):
            try:
                level = float(part.split("=", 1)[1])
            except ValueError:
                raise ValueError(f"bad awareness value in variant {part!r}") from None
            if not 0.0 <= level <= 1.0:
                raise ValueError("awareness must lie in [0,1]")
            out = replace(out, awareness=level)
        else:
            raise ValueError(f"unknown variant: {part!r}")
    return out
