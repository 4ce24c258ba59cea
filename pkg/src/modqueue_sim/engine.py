"""Single-trial simulation engine: the discrete-time review loop.

Tick conventions (these pin down every off-by-one in the results):

* A timestep processes moderators in ascending id order; the clock advances
  by one after the whole team has acted.
* Selecting a report consumes the selection timestep as the first work tick,
  so one moderator finishes one length-L report in exactly L timesteps.
* When a report completes, every other moderator reviewing it is released
  immediately; a released moderator whose turn in the current timestep has
  not yet come acts as idle within the same timestep, one released earlier
  in the order waits for the next. Released moderators' accrued ticks on the
  report count as redundant time.
* When two moderators would finish the same report in the same timestep, the
  lower id (processed first) completes it.
* Each commit to a report someone else is already reviewing counts as one
  collision; progress is never shared between reviewers.

Random draws are consumed in moderator-id order within each timestep. A
draw happens only when the outcome is genuinely random: a two-candidate
position pick, a uniform pick over two or more candidates, or an awareness
coin with awareness strictly between 0 and 1. Deterministic cases (a single
remaining candidate, awareness 0 or 1) consume nothing.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from . import metrics
from .core import Moderator, Report, TopTwo, Uniform

EventSink = Callable[[int, int, str, int], None]
"""Receives (timestep, mod_id, action, report_id); actions: select, complete, release."""


@dataclass(frozen=True)
class Busy:
    """A moderator mid-review: which report, and how many own ticks so far."""

    report_id: int
    progress: int


@dataclass(frozen=True)
class TrialResult:
    """All metrics recorded from one trial; per-mod tuples are indexed by mod id."""

    completion_time: int
    collisions: int
    work_time: tuple[int, ...]
    redundant_time: tuple[int, ...]
    reports_seen: tuple[int, ...]
    reports_completed: tuple[int, ...]
    toxic_seen: tuple[int, ...]
    toxic_completed: tuple[int, ...]
    longest_toxic_run: tuple[int, ...]
    seen_sequences: tuple[tuple[int, ...], ...]


class SimulationState:
    """Mutable state of one running trial.

    Parallel lists indexed by report id or mod id keep the hot loop cheap;
    ``mod_status`` presents the per-mod view the update rules are written
    against.
    """

    __slots__ = (
        "reports",
        "mods",
        "n",
        "k",
        "lengths",
        "complete",
        "incomplete_count",
        "mod_report",
        "mod_ticks",
        "reviewers",
        "view_orders",
        "view_cursor",
        "strategy_p",
        "awareness",
        "toxic_flags",
        "clock",
        "collisions",
        "work_time",
        "redundant_time",
        "reports_seen",
        "reports_completed",
        "toxic_seen",
        "toxic_completed",
        "seen_sequences",
        "event_sink",
    )

    def __init__(
        self,
        reports: Sequence[Report],
        mods: Sequence[Moderator],
        event_sink: Optional[EventSink] = None,
    ):
        n = len(reports)
        k = len(mods)
        self.reports = tuple(reports)
        self.mods = tuple(mods)
        self.n = n
        self.k = k
        self.lengths = [r.length for r in reports]
        self.complete = [False] * n
        self.incomplete_count = n
        self.mod_report = [-1] * k  # -1 = idle
        self.mod_ticks = [0] * k
        self.reviewers: list[list[int]] = [[] for _ in range(n)]
        self.view_orders = [list(m.view.order) for m in mods]
        self.view_cursor = [0] * k
        # strategy_p: probability of taking the first candidate; None = uniform pick
        self.strategy_p: list[Optional[float]] = [
            m.strategy.p_first if isinstance(m.strategy, TopTwo) else None for m in mods
        ]
        self.awareness = [m.awareness for m in mods]
        flags_by_tau: dict[float, list[bool]] = {}
        self.toxic_flags = []
        for m in mods:
            flags = flags_by_tau.get(m.toxicity_threshold)
            if flags is None:
                flags = [r.toxicity > m.toxicity_threshold for r in reports]
                flags_by_tau[m.toxicity_threshold] = flags
            self.toxic_flags.append(flags)
        self.clock = 0
        self.collisions = 0
        self.work_time = [0] * k
        self.redundant_time = [0] * k
        self.reports_seen = [0] * k
        self.reports_completed = [0] * k
        self.toxic_seen = [0] * k
        self.toxic_completed = [0] * k
        self.seen_sequences: list[list[int]] = [[] for _ in range(k)]
        self.event_sink = event_sink

    def mod_status(self, mod_id: int) -> Optional[Busy]:
        """Current status of one moderator: a Busy record, or None when idle."""
        rid = self.mod_report[mod_id]
        if rid < 0:
            return None
        return Busy(rid, self.mod_ticks[mod_id])

    def result(self) -> TrialResult:
        runs = tuple(
            metrics.longest_toxic_run(
                self.seen_sequences[i], self.reports, self.mods[i].toxicity_threshold
            )
            for i in range(self.k)
        )
        return TrialResult(
            completion_time=self.clock,
            collisions=self.collisions,
            work_time=tuple(self.work_time),
            redundant_time=tuple(self.redundant_time),
            reports_seen=tuple(self.reports_seen),
            reports_completed=tuple(self.reports_completed),
            toxic_seen=tuple(self.toxic_seen),
            toxic_completed=tuple(self.toxic_completed),
            longest_toxic_run=runs,
            seen_sequences=tuple(tuple(s) for s in self.seen_sequences),
        )


def select_report(
    mod_id: int, state: SimulationState, rng: random.Random
) -> Optional[int]:
    """Pick an incomplete report for an idle moderator, or None if all picks get rejected.

    Candidates are the incomplete reports in the moderator's view order,
    minus any rejected earlier in this same selection episode (rejections do
    not persist to future timesteps). A pick that lands on a report someone
    else is reviewing is rejected with probability ``awareness`` and
    re-selection continues over the remaining candidates; otherwise it is
    committed, which is what the caller counts as a collision.
    """
    order = state.view_orders[mod_id]
    complete = state.complete
    n = state.n
    cur = state.view_cursor[mod_id]
    while cur < n and complete[order[cur]]:
        cur += 1
    state.view_cursor[mod_id] = cur

    p_first = state.strategy_p[mod_id]
    rho = state.awareness[mod_id]
    reviewers = state.reviewers
    excluded: set[int] = set()

    while True:
        if p_first is not None:
            first = second = -1
            for j in range(cur, n):
                rid = order[j]
                if complete[rid] or rid in excluded:
                    continue
                if first < 0:
                    first = rid
                else:
                    second = rid
                    break
            if first < 0:
                return None
            if second < 0:
                pick = first
            else:
                pick = first if rng.random() < p_first else second
        else:
            available = [
                rid
                for rid in order[cur:]
                if not complete[rid] and rid not in excluded
            ]
            if not available:
                return None
            pick = available[0] if len(available) == 1 else available[rng.randrange(len(available))]

        if not reviewers[pick]:
            return pick
        if rho <= 0.0:
            return pick
        if rho >= 1.0 or rng.random() < rho:
            excluded.add(pick)
            continue
        return pick


def _complete_report(state: SimulationState, completer: int, rid: int) -> None:
    state.complete[rid] = True
    state.incomplete_count -= 1
    state.reports_completed[completer] += 1
    if state.toxic_flags[completer][rid]:
        state.toxic_completed[completer] += 1
    for j in state.reviewers[rid]:
        if j != completer:
            state.redundant_time[j] += state.mod_ticks[j]
            state.mod_report[j] = -1
            state.mod_ticks[j] = 0
            if state.event_sink is not None:
                state.event_sink(state.clock, j, "release", rid)
    state.reviewers[rid] = []
    state.mod_report[completer] = -1
    state.mod_ticks[completer] = 0
    if state.event_sink is not None:
        state.event_sink(state.clock, completer, "complete", rid)


def do_when_idle(mod_id: int, state: SimulationState, rng: random.Random) -> None:
    """Idle-moderator rule: select a report and start it, or stay idle.

    Committing makes the moderator busy with progress 1 (the selection
    timestep is its first work tick), records the report as seen, and
    counts a collision when the report already had a reviewer.
    """
    if state.incomplete_count == 0:
        return
    rid = select_report(mod_id, state, rng)
    if rid is None:
        return
    state.seen_sequences[mod_id].append(rid)
    state.reports_seen[mod_id] += 1
    if state.toxic_flags[mod_id][rid]:
        state.toxic_seen[mod_id] += 1
    if state.reviewers[rid]:
        state.collisions += 1
    state.reviewers[rid].append(mod_id)
    state.mod_report[mod_id] = rid
    state.mod_ticks[mod_id] = 1
    state.work_time[mod_id] += 1
    if state.event_sink is not None:
        state.event_sink(state.clock, mod_id, "select", rid)
    if state.lengths[rid] == 1:
        _complete_report(state, mod_id, rid)


def do_when_busy(mod_id: int, state: SimulationState) -> None:
    """Busy-moderator rule: accrue one tick; on reaching the report's length, complete it.

    Completion releases every other reviewer immediately, crediting their
    accrued ticks on the report to redundant time.
    """
    rid = state.mod_report[mod_id]
    state.mod_ticks[mod_id] += 1
    state.work_time[mod_id] += 1
    if state.mod_ticks[mod_id] == state.lengths[rid]:
        _complete_report(state, mod_id, rid)


def run_timestep(state: SimulationState, rng: random.Random) -> None:
    """Process every moderator once in id order, then advance the clock."""
    mod_report = state.mod_report
    for i in range(state.k):
        if mod_report[i] < 0:
            do_when_idle(i, state, rng)
        else:
            do_when_busy(i, state)
    state.clock += 1


def run_trial(
    reports: Sequence[Report],
    mods: Sequence[Moderator],
    seed: int,
    event_sink: Optional[EventSink] = None,
    fast: bool = True,
) -> TrialResult:
    """Run one trial to completion; a deterministic function of (reports, mods, seed).

    ``fast`` enables an internal fast-forward over stretches where every
    moderator is mid-review and nothing can happen; it never changes the
    result (no selections, completions, or draws occur in skipped ticks).
    """
    if not reports:
        raise ValueError("report set must be nonempty")
    if not mods:
        raise ValueError("moderation team must be nonempty")
    n = len(reports)
    if [r.id for r in reports] != list(range(n)):
        raise ValueError("report ids must be contiguous from 0")
    for m in mods:
        if not m.view.is_permutation_over(n):
            raise ValueError(f"mod {m.id} view is not a permutation over the report set")
    if [m.id for m in mods] != list(range(len(mods))):
        raise ValueError("mod ids must be contiguous from 0")

    state = SimulationState(reports, mods, event_sink)
    rng = random.Random(seed)
    mod_report = state.mod_report
    mod_ticks = state.mod_ticks
    work_time = state.work_time
    lengths = state.lengths
    k = state.k
    while state.incomplete_count > 0:
        if fast and all(rid >= 0 for rid in mod_report):
            min_remaining = min(
                lengths[mod_report[i]] - mod_ticks[i] for i in range(k)
            )
            if min_remaining > 1:
                skip = min_remaining - 1
                for i in range(k):
                    mod_ticks[i] += skip
                    work_time[i] += skip
                state.clock += skip
        run_timestep(state, rng)
    return state.result()
