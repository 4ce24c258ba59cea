import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from modqueue_sim.core import Report
from modqueue_sim.engine import run_trial
from modqueue_sim.experiments import baseline_preset, build_trial
from modqueue_sim.metrics import (
    longest_toxic_run,
    optimal_values,
    percent_vs_optimal,
    team_dispersion,
)


def _uniform_reports(n, length):
    return tuple(Report(i, length, 0.0) for i in range(n))


def test_optimal_values_baseline_anchors():
    reports = _uniform_reports(100, 5)
    assert optimal_values(reports, 10, 0.5).completion_time_lower_bound == 50.0
    assert optimal_values(reports, 2, 0.5).completion_time_lower_bound == 250.0
    ov3 = optimal_values(reports, 3, 0.5)
    assert ov3.completion_time_lower_bound == pytest.approx(166.6667, abs=1e-3)
    assert ov3.completion_time_achievable == 170  # 5 * ceil(100/3)


def test_optimal_values_fields():
    reports = tuple(Report(i, 5, 1.0 if i < 30 else 0.0) for i in range(100))
    ov = optimal_values(reports, 4, 0.5)
    assert ov.collisions == 0
    assert ov.reports_per_mod == 25.0
    assert ov.toxic_per_mod == 7.5
    assert ov.completion_time_achievable >= ov.completion_time_lower_bound


@given(
    n=st.integers(min_value=1, max_value=50),
    length=st.integers(min_value=1, max_value=6),
    k=st.integers(min_value=1, max_value=12),
)
def test_achievable_equals_bound_iff_divisible(n, length, k):
    ov = optimal_values(_uniform_reports(n, length), k, 0.5)
    assert ov.completion_time_achievable == length * math.ceil(n / k)
    if n % k == 0:
        assert ov.completion_time_achievable == ov.completion_time_lower_bound
    else:
        assert ov.completion_time_achievable > ov.completion_time_lower_bound


def test_longest_toxic_run_examples():
    reports = tuple(
        Report(i, 1, tox) for i, tox in enumerate([1.0, 1.0, 0.0, 1.0])
    )
    assert longest_toxic_run([0, 1, 2, 3], reports, 0.5) == 2
    assert longest_toxic_run([], reports, 0.5) == 0
    clean = tuple(Report(i, 1, 0.0) for i in range(3))
    assert longest_toxic_run([0, 1, 2], clean, 0.5) == 0


@given(
    toxics=st.lists(st.booleans(), min_size=0, max_size=25),
)
def test_longest_toxic_run_bounds(toxics):
    reports = tuple(
        Report(i, 1, 1.0 if t else 0.0) for i, t in enumerate(toxics)
    )
    seq = list(range(len(toxics)))
    run = longest_toxic_run(seq, reports, 0.5)
    assert 0 <= run <= len(seq)
    assert (run == len(seq)) == (all(toxics) if seq else True)


def test_team_dispersion_examples():
    assert team_dispersion([10, 10, 10]) == (10, 0)
    assert team_dispersion([0, 20]) == (10, 100)
    with pytest.raises(ValueError):
        team_dispersion([])


def test_team_dispersion_matches_hand_recompute_on_logged_trial():
    # one real baseline trial, variance recomputed with the two-pass
    # spreadsheet formula sum((x - mean)^2) / k
    config = baseline_preset()
    reports, mods, seed = build_trial(config, 10, 0)
    result = run_trial(reports, mods, seed)
    values = list(result.reports_seen)
    mean, variance = team_dispersion(values)
    hand_mean = sum(values) / len(values)
    hand_var = sum((v - hand_mean) ** 2 for v in values) / len(values)
    assert mean == pytest.approx(hand_mean)
    assert variance == pytest.approx(hand_var)


def test_percent_vs_optimal():
    assert percent_vs_optimal(208.3, 50) == pytest.approx(4.166)
    assert percent_vs_optimal(50, 50) == 1.0
    assert percent_vs_optimal(135, 50) == pytest.approx(2.7)
    with pytest.raises(ValueError):
        percent_vs_optimal(10, 0)
    with pytest.raises(ValueError):
        percent_vs_optimal(10, -5)
