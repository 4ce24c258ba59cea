"""Shared experiment runs for the test suite.

The heavyweight 100-trial sweeps are computed once per session and shared
between the experiment tests and the acceptance suite.
"""

from __future__ import annotations

from dataclasses import replace

import pytest

from modqueue_sim.core import ViewPolicy
from modqueue_sim.experiments import (
    baseline_preset,
    compare_interventions,
    run_experiment,
    sweep_awareness,
)

ACCEPTANCE_SEED = 20260809
AWARENESS_LEVELS = (0.0, 0.2, 0.4, 0.6, 0.8, 1.0)


@pytest.fixture(scope="session")
def acceptance_base():
    return replace(baseline_preset(), master_seed=ACCEPTANCE_SEED)


@pytest.fixture(scope="session")
def baseline_run(acceptance_base):
    return run_experiment(acceptance_base)


@pytest.fixture(scope="session")
def view_comparison(acceptance_base):
    return compare_interventions(
        acceptance_base,
        {
            "reverse": replace(acceptance_base, view_policy=ViewPolicy.REVERSE),
            "random": replace(acceptance_base, view_policy=ViewPolicy.RANDOM),
        },
    )


@pytest.fixture(scope="session")
def awareness_table(acceptance_base):
    return sweep_awareness(acceptance_base, AWARENESS_LEVELS)
