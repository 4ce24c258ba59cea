"""Modqueue view generators: the reordering interventions and their plumbing.

Every function here returns views that are true permutations of 0..n-1;
the engine validates this again before running a trial.
"""

from __future__ import annotations

import random
from typing import Sequence

from .core import ModqueueView, Report, ViewPolicy


def default_views(k: int, n: int) -> list[ModqueueView]:
    """All k moderators see the identity order [0, 1, ..., n-1]."""
    identity = tuple(range(n))
    return [ModqueueView(identity) for _ in range(k)]


def reverse_split_views(k: int, n: int) -> list[ModqueueView]:
    """First ceil(k/2) moderators keep the identity order; the rest see it reversed.

    Odd teams put the extra moderator on the identity half.
    """
    identity = tuple(range(n))
    reversed_order = tuple(range(n - 1, -1, -1))
    split = (k + 1) // 2
    return [ModqueueView(identity if i < split else reversed_order) for i in range(k)]


def random_views(k: int, n: int, rng: random.Random) -> list[ModqueueView]:
    """Independent uniform random permutation per moderator, drawn in mod-id order."""
    views = []
    for _ in range(k):
        order = list(range(n))
        rng.shuffle(order)
        views.append(ModqueueView(tuple(order)))
    return views


def distribute_toxicity(
    view: ModqueueView, reports: Sequence[Report], tau: float
) -> ModqueueView:
    """Interleave toxic and non-toxic reports, preserving each class's order.

    The output starts with the class of the view's first report and
    alternates while both classes last; the surplus class's remainder is
    appended unchanged. Reports with toxicity strictly above ``tau`` are
    toxic. Idempotent: reapplying yields the same view.
    """
    if not view.order:
        return view
    toxic_flag = {r.id: r.toxicity > tau for r in reports}
    toxic = [rid for rid in view.order if toxic_flag[rid]]
    clean = [rid for rid in view.order if not toxic_flag[rid]]
    take_toxic = toxic_flag[view.order[0]]
    merged: list[int] = []
    ti = ci = 0
    while ti < len(toxic) and ci < len(clean):
        if take_toxic:
            merged.append(toxic[ti])
            ti += 1
        else:
            merged.append(clean[ci])
            ci += 1
        take_toxic = not take_toxic
    merged.extend(toxic[ti:])
    merged.extend(clean[ci:])
    return ModqueueView(tuple(merged))


def assign_views(
    policy: ViewPolicy,
    k: int,
    reports: Sequence[Report],
    distribute: bool,
    tau: float,
    rng: random.Random,
) -> list[ModqueueView]:
    """Build the team's views for one trial: base policy, then optional toxicity spread."""
    n = len(reports)
    if policy is ViewPolicy.DEFAULT:
        views = default_views(k, n)
    elif policy is ViewPolicy.REVERSE:
        views = reverse_split_views(k, n)
    else:
        views = random_views(k, n, rng)
    if distribute:
        views = [distribute_toxicity(v, reports, tau) for v in views]
    return views
