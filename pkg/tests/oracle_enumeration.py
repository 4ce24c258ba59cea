"""Exhaustive branch enumeration of trial dynamics for tiny instances.

Instead of drawing random numbers, this walks every probabilistic outcome
of the selection and awareness coins, evolves each branch deterministically
under the documented tick conventions, and returns probability-weighted
expectations. It is written independently of the engine (plain dicts and
recursion, no shared code) so the two implementations can check each other.

Only practical for a handful of reports and moderators: the branch tree
grows with every coin flip.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class Expectations:
    completion_time: float
    collisions: float
    first_step_collisions: float
    branches: int


class _Branch:
    __slots__ = (
        "lengths",
        "views",
        "p_first",
        "awareness",
        "done",
        "busy",  # mod -> (report, own ticks) or None
        "clock",
        "collisions",
        "first_step_collisions",
    )

    def __init__(self, lengths, views, p_first, awareness):
        self.lengths = list(lengths)
        self.views = [list(v) for v in views]
        self.p_first = p_first
        self.awareness = awareness
        self.done = [False] * len(lengths)
        self.busy: list[Optional[tuple[int, int]]] = [None] * len(views)
        self.clock = 0
        self.collisions = 0
        self.first_step_collisions = 0

    def copy(self) -> "_Branch":
        twin = _Branch.__new__(_Branch)
        twin.lengths = self.lengths
        twin.views = self.views
        twin.p_first = self.p_first
        twin.awareness = self.awareness
        twin.done = list(self.done)
        twin.busy = list(self.busy)
        twin.clock = self.clock
        twin.collisions = self.collisions
        twin.first_step_collisions = self.first_step_collisions
        return twin

    def reviewers_of(self, rid: int) -> list[int]:
        return [m for m, b in enumerate(self.busy) if b is not None and b[0] == rid]

    def all_done(self) -> bool:
        return all(self.done)


def _selection_outcomes(branch: _Branch, mod: int) -> list[tuple[float, Optional[int]]]:
    """Every (probability, committed report or None) outcome of one selection episode."""
    outcomes: list[tuple[float, Optional[int]]] = []
    rho = branch.awareness

    def recurse(excluded: frozenset[int], prob: float) -> None:
        avail = [
            rid
            for rid in branch.views[mod]
            if not branch.done[rid] and rid not in excluded
        ]
        if not avail:
            outcomes.append((prob, None))
            return
        if len(avail) == 1:
            picks = [(1.0, avail[0])]
        else:
            picks = [(branch.p_first, avail[0]), (1.0 - branch.p_first, avail[1])]
        for p_pick, rid in picks:
            if p_pick == 0.0:
                continue
            occupied = bool(branch.reviewers_of(rid))
            if not occupied or rho == 0.0:
                outcomes.append((prob * p_pick, rid))
                continue
            if rho < 1.0:
                outcomes.append((prob * p_pick * (1.0 - rho), rid))
            recurse(excluded | {rid}, prob * p_pick * rho)

    recurse(frozenset(), 1.0)
    return outcomes


def _commit(branch: _Branch, mod: int, rid: int) -> None:
    if branch.reviewers_of(rid):
        branch.collisions += 1
        if branch.clock == 0:
            branch.first_step_collisions += 1
    branch.busy[mod] = (rid, 1)
    if branch.lengths[rid] == 1:
        _complete(branch, mod, rid)


def _complete(branch: _Branch, completer: int, rid: int) -> None:
    branch.done[rid] = True
    for other in branch.reviewers_of(rid):
        if other != completer:
            branch.busy[other] = None
    branch.busy[completer] = None


def _advance(branch: _Branch, mod: int, prob: float, results: list) -> None:
    """Process moderators mod..k-1 of the current timestep, then recurse into the next."""
    k = len(branch.busy)
    while mod < k:
        state = branch.busy[mod]
        if state is None:
            if not branch.all_done():
                outcomes = _selection_outcomes(branch, mod)
                if len(outcomes) == 1 and outcomes[0][1] is None:
                    pass  # nothing selectable; stay idle, no split
                else:
                    for p_out, rid in outcomes:
                        twin = branch.copy()
                        if rid is not None:
                            _commit(twin, mod, rid)
                        _advance(twin, mod + 1, prob * p_out, results)
                    return
        else:
            rid, ticks = state
            ticks += 1
            branch.busy[mod] = (rid, ticks)
            if ticks == branch.lengths[rid]:
                _complete(branch, mod, rid)
        mod += 1
    branch.clock += 1
    if branch.all_done():
        results.append((prob, branch))
        return
    if branch.clock > sum(branch.lengths) * (k + 1) + 10:
        raise RuntimeError("enumeration did not terminate; instance too pathological")
    _advance(branch, 0, prob, results)


def enumerate_trial(
    lengths: list[int],
    views: list[list[int]],
    p_first: float,
    awareness: float,
) -> Expectations:
    """Expected completion time and collisions over every branch of one instance."""
    root = _Branch(lengths, views, p_first, awareness)
    results: list[tuple[float, _Branch]] = []
    _advance(root, 0, 1.0, results)
    total_p = sum(p for p, _ in results)
    if abs(total_p - 1.0) > 1e-9:
        raise RuntimeError(f"branch probabilities sum to {total_p}, not 1")
    return Expectations(
        completion_time=sum(p * b.clock for p, b in results),
        collisions=sum(p * b.collisions for p, b in results),
        first_step_collisions=sum(p * b.first_step_collisions for p, b in results),
        branches=len(results),
    )
