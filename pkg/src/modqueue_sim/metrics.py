"""Derived metrics and best-case reference values for trial results."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .core import Report


@dataclass(frozen=True)
class OptimalValues:
    """Best-case reference values for one (report set, team size) instance.

    ``completion_time_lower_bound`` is the work-conservation bound
    sum(lengths) / k. ``completion_time_achievable`` is the exact best
    makespan for uniform lengths (L * ceil(N/k)); for explicit length lists
    it degrades to the standard packing lower bound max(ceil(sum/k), max length).
    """

    completion_time_lower_bound: float
    completion_time_achievable: int
    reports_per_mod: float
    toxic_per_mod: float
    collisions: int = 0


def optimal_values(reports: Sequence[Report], k: int, tau: float) -> OptimalValues:
    if k < 1:
        raise ValueError("team size must be >= 1")
    total = sum(r.length for r in reports)
    n = len(reports)
    lengths = {r.length for r in reports}
    if len(lengths) == 1:
        achievable = next(iter(lengths)) * math.ceil(n / k)
    else:
        achievable = max(math.ceil(total / k), max(lengths))
    toxic_count = sum(1 for r in reports if r.toxicity > tau)
    return OptimalValues(
        completion_time_lower_bound=total / k,
        completion_time_achievable=achievable,
        reports_per_mod=n / k,
        toxic_per_mod=toxic_count / k,
        collisions=0,
    )


def longest_toxic_run(
    seen_sequence: Sequence[int], reports: Sequence[Report], tau: float
) -> int:
    """Length of the longest consecutive streak of toxic reports in a seen sequence."""
    toxic_flag = {r.id: r.toxicity > tau for r in reports}
    best = run = 0
    for rid in seen_sequence:
        if toxic_flag[rid]:
            run += 1
            if run > best:
                best = run
        else:
            run = 0
    return best


def team_dispersion(values: Sequence[float]) -> tuple[float, float]:
    """Mean and population variance (divide by k) of one team's per-mod values.

    The full moderation team is observed, not sampled, hence population
    variance.
    """
    if not values:
        raise ValueError("team_dispersion requires a nonempty value list")
    k = len(values)
    mean = sum(values) / k
    variance = sum((v - mean) ** 2 for v in values) / k
    return mean, variance


def percent_vs_optimal(observed: float, optimal: float) -> float:
    """Ratio of an observed metric to its best-case value."""
    if optimal <= 0:
        raise ValueError("optimal value must be positive")
    return observed / optimal
