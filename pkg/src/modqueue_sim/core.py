"""Domain types, experiment configuration, and report-set generation.

All types are frozen dataclasses: once constructed they are immutable value
objects and safe to share across concurrently running trials.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Sequence, Union


@dataclass(frozen=True)
class Report:
    """One queued report awaiting review.

    ``length`` is the number of time units a moderator must spend on the
    report to complete it; ``toxicity`` scores its content in [0, 1].
    """

    id: int
    length: int
    toxicity: float


@dataclass(frozen=True)
class TopTwo:
    """Pick the first visible incomplete report with probability ``p_first``, else the second."""

    p_first: float


@dataclass(frozen=True)
class Uniform:
    """Pick uniformly at random among all visible incomplete reports."""


SelectionStrategy = Union[TopTwo, Uniform]


@dataclass(frozen=True)
class ModqueueView:
    """Display order of report ids for one moderator; a permutation of 0..N-1."""

    order: tuple[int, ...]

    def is_permutation_over(self, n: int) -> bool:
        return len(self.order) == n and sorted(self.order) == list(range(n))


@dataclass(frozen=True)
class Moderator:
    """An agent working the queue.

    ``awareness`` is the probability that the moderator, having picked a
    report someone else is already reviewing, rejects the pick and chooses
    again. Reports with toxicity strictly above ``toxicity_threshold`` count
    as toxic for this moderator.
    """

    id: int
    view: ModqueueView
    strategy: SelectionStrategy
    awareness: float
    toxicity_threshold: float


@dataclass(frozen=True)
class BernoulliZeroOne:
    """Independent toxicity draws: 1.0 with probability ``p_toxic``, else 0.0."""

    p_toxic: float


@dataclass(frozen=True)
class ExplicitToxicity:
    """Fixed per-report toxicity values, listed in report-id order."""

    values: tuple[float, ...]


ToxicityModel = Union[BernoulliZeroOne, ExplicitToxicity]


class ViewPolicy(str, Enum):
    DEFAULT = "default"
    REVERSE = "reverse"
    RANDOM = "random"


@dataclass(frozen=True)
class ExperimentConfig:
    """Full declarative description of one experiment sweep."""

    num_reports: int
    report_length: Union[int, tuple[int, ...]]
    team_sizes: tuple[int, ...]
    trials: int
    master_seed: int
    view_policy: ViewPolicy
    distribute_toxicity: bool
    awareness: float
    strategy: SelectionStrategy
    toxicity: ToxicityModel
    toxicity_threshold: float


class ConfigError(ValueError):
    """Raised when a config violates its invariants; carries every violation."""

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


def config_violations(config: ExperimentConfig) -> list[str]:
    """Collect the complete list of invariant violations (empty when valid)."""
    errors: list[str] = []
    if config.num_reports < 1:
        errors.append("num_reports must be >= 1")
    if isinstance(config.report_length, int):
        if config.report_length < 1:
            errors.append("report_length must be >= 1")
    else:
        if len(config.report_length) != config.num_reports:
            errors.append("report_length list must have num_reports entries")
        if any(length < 1 for length in config.report_length):
            errors.append("report_length entries must all be >= 1")
    if not config.team_sizes:
        errors.append("team_sizes must be nonempty")
    elif any(k < 1 for k in config.team_sizes):
        errors.append("team_sizes entries must all be >= 1")
    if config.trials < 1:
        errors.append("trials must be >= 1")
    if not 0 <= config.master_seed < 2**64:
        errors.append("master_seed must be an unsigned 64-bit integer")
    if not 0.0 <= config.awareness <= 1.0:
        errors.append("awareness must lie in [0,1]")
    if not 0.0 <= config.toxicity_threshold <= 1.0:
        errors.append("toxicity_threshold must lie in [0,1]")
    if isinstance(config.strategy, TopTwo) and not 0.0 <= config.strategy.p_first <= 1.0:
        errors.append("strategy.p_first must lie in [0,1]")
    if isinstance(config.toxicity, BernoulliZeroOne):
        if not 0.0 <= config.toxicity.p_toxic <= 1.0:
            errors.append("toxicity.p_toxic must lie in [0,1]")
    else:
        if len(config.toxicity.values) != config.num_reports:
            errors.append("toxicity.values must have num_reports entries")
        if any(not 0.0 <= v <= 1.0 for v in config.toxicity.values):
            errors.append("toxicity.values entries must all lie in [0,1]")
    return errors


def validate_config(config: ExperimentConfig) -> ExperimentConfig:
    """Return ``config`` unchanged if valid, else raise ConfigError with all violations."""
    errors = config_violations(config)
    if errors:
        raise ConfigError(errors)
    return config


def make_reports(config: ExperimentConfig, rng: random.Random) -> tuple[Report, ...]:
    """Build the trial's report set: ids 0..N-1, lengths per config, toxicity from ``rng``.

    Toxicity values are drawn independently in report-id order, so a fixed
    rng state always yields the same report set.
    """
    n = config.num_reports
    if isinstance(config.report_length, int):
        lengths = [config.report_length] * n
    else:
        lengths = list(config.report_length)
    if isinstance(config.toxicity, BernoulliZeroOne):
        p = config.toxicity.p_toxic
        toxicities = [1.0 if rng.random() < p else 0.0 for _ in range(n)]
    else:
        toxicities = list(config.toxicity.values)
    return tuple(Report(i, lengths[i], toxicities[i]) for i in range(n))


# --- JSON codec -----------------------------------------------------------
#
# The on-disk config document uses exactly the snake_case field names of
# ExperimentConfig. Unknown fields anywhere in the document are rejected.

_CONFIG_FIELDS = (
    "num_reports",
    "report_length",
    "team_sizes",
    "trials",
    "master_seed",
    "view_policy",
    "distribute_toxicity",
    "awareness",
    "strategy",
    "toxicity",
    "toxicity_threshold",
)


def config_to_dict(config: ExperimentConfig) -> dict[str, Any]:
    if isinstance(config.strategy, TopTwo):
        strategy: dict[str, Any] = {"variant": "top_two", "p_first": config.strategy.p_first}
    else:
        strategy = {"variant": "uniform"}
    if isinstance(config.toxicity, BernoulliZeroOne):
        toxicity: dict[str, Any] = {
            "variant": "bernoulli_zero_one",
            "p_toxic": config.toxicity.p_toxic,
        }
    else:
        toxicity = {"variant": "explicit", "values": list(config.toxicity.values)}
    report_length: Any = config.report_length
    if not isinstance(report_length, int):
        report_length = list(report_length)
    return {
        "num_reports": config.num_reports,
        "report_length": report_length,
        "team_sizes": list(config.team_sizes),
        "trials": config.trials,
        "master_seed": config.master_seed,
        "view_policy": config.view_policy.value,
        "distribute_toxicity": config.distribute_toxicity,
        "awareness": config.awareness,
        "strategy": strategy,
        "toxicity": toxicity,
        "toxicity_threshold": config.toxicity_threshold,
    }


def _reject_unknown(data: dict[str, Any], allowed: Sequence[str], where: str) -> None:
    unknown = sorted(set(data) - set(allowed))
    if unknown:
        raise ConfigError([f"unknown field(s) in {where}: {', '.join(unknown)}"])


def config_from_dict(data: dict[str, Any]) -> ExperimentConfig:
    """Parse a config document; raises ConfigError on unknown or missing fields."""
    if not isinstance(data, dict):
        raise ConfigError(["config document must be a JSON object"])
    _reject_unknown(data, _CONFIG_FIELDS, "config")
    missing = [name for name in _CONFIG_FIELDS if name not in data]
    if missing:
        raise ConfigError([f"missing field(s): {', '.join(missing)}"])

    strategy_data = data["strategy"]
    if not isinstance(strategy_data, dict) or "variant" not in strategy_data:
        raise ConfigError(["strategy must be an object with a 'variant' field"])
    if strategy_data["variant"] == "top_two":
        _reject_unknown(strategy_data, ("variant", "p_first"), "strategy")
        strategy: SelectionStrategy = TopTwo(p_first=float(strategy_data["p_first"]))
    elif strategy_data["variant"] == "uniform":
        _reject_unknown(strategy_data, ("variant",), "strategy")
        strategy = Uniform()
    else:
        raise ConfigError([f"unknown strategy variant: {strategy_data['variant']!r}"])

    toxicity_data = data["toxicity"]
    if not isinstance(toxicity_data, dict) or "variant" not in toxicity_data:
        raise ConfigError(["toxicity must be an object with a 'variant' field"])
    if toxicity_data["variant"] == "bernoulli_zero_one":
        _reject_unknown(toxicity_data, ("variant", "p_toxic"), "toxicity")
        toxicity: ToxicityModel = BernoulliZeroOne(p_toxic=float(toxicity_data["p_toxic"]))
    elif toxicity_data["variant"] == "explicit":
        _reject_unknown(toxicity_data, ("variant", "values"), "toxicity")
        toxicity = ExplicitToxicity(values=tuple(float(v) for v in toxicity_data["values"]))
    else:
        raise ConfigError([f"unknown toxicity variant: {toxicity_data['variant']!r}"])

    try:
        view_policy = ViewPolicy(data["view_policy"])
    except ValueError:
        raise ConfigError([f"unknown view_policy: {data['view_policy']!r}"]) from None

    report_length = data["report_length"]
    if not isinstance(report_length, int):
        report_length = tuple(int(length) for length in report_length)

    return ExperimentConfig(
        num_reports=int(data["num_reports"]),
        report_length=report_length,
        team_sizes=tuple(int(k) for k in data["team_sizes"]),
        trials=int(data["trials"]),
        master_seed=int(data["master_seed"]),
        view_policy=view_policy,
        distribute_toxicity=bool(data["distribute_toxicity"]),
        awareness=float(data["awareness"]),
        strategy=strategy,
        toxicity=toxicity,
        toxicity_threshold=float(data["toxicity_threshold"]),
    )
