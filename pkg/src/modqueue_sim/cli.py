"""Command-line entry point: run experiments and write stable result files.

Commands:
  run       <config.json>            run one experiment from a config file
  baseline  (no config needed)       run the built-in baseline preset
  compare   <config.json> VARIANT..  run the config plus named variants

Outputs (in --output DIR): ``summary.json`` per setting, flat ``trials.csv``
and ``mods.csv`` (one row per trial / per mod-trial), and for compare runs
``comparison.csv``. Files are UTF-8, LF line endings, and byte-identical
across re-runs with the same inputs. Exit codes: 1 for config/variant
problems, 2 for I/O failures.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path
from typing import Iterable, Optional

from .core import ConfigError, ExperimentConfig, config_from_dict, validate_config
from .experiments import (
    BASE_SETTING,
    ComparisonTable,
    ExperimentSummary,
    apply_variant_spec,
    baseline_preset,
    compare_interventions,
    run_experiment,
)

SCHEMA_VERSION = 1
DEFAULT_SEED = 0  # the documented constant default; all randomness flows from --seed

TRIALS_CSV_COLUMNS = (
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

MODS_CSV_COLUMNS = (
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

COMPARISON_CSV_COLUMNS = (
    "schema_version",
    "setting",
    "team_size",
    "metric",
    "mean",
    "base_mean",
    "pct_change_vs_base",
    "pct_change_of_means",
)


def _fmt(value: object) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path: Path, columns: Iterable[str], rows: Iterable[Iterable[object]]) -> None:
    lines = [",".join(columns)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def _trials_rows(setting: str, summary: ExperimentSummary):
    for cell in summary.cells:
        for rec in cell.records:
            yield (
                SCHEMA_VERSION,
                setting,
                cell.team_size,
                rec.trial_index,
                rec.seed,
                rec.result.completion_time,
                rec.result.collisions,
                cell.optimal.completion_time_lower_bound,
                cell.optimal.completion_time_achievable,
            )


def _mods_rows(setting: str, summary: ExperimentSummary):
    for cell in summary.cells:
        for rec in cell.records:
            r = rec.result
            for i in range(cell.team_size):
                yield (
                    SCHEMA_VERSION,
                    setting,
                    cell.team_size,
                    rec.trial_index,
                    i,
                    r.work_time[i],
                    r.redundant_time[i],
                    r.reports_seen[i],
                    r.reports_completed[i],
                    r.toxic_seen[i],
                    r.toxic_completed[i],
                    r.longest_toxic_run[i],
                )


def _comparison_rows(table: ComparisonTable):
    from .experiments import COMPARISON_METRICS

    for setting in table.settings:
        for metric in COMPARISON_METRICS:
            for k in table.team_sizes:
                mean = table.mean(setting, k, metric)
                base_mean = table.mean(BASE_SETTING, k, metric)
                pct = table.pct_change(setting, k, metric)
                yield (
                    SCHEMA_VERSION,
                    setting,
                    k,
                    metric,
                    mean,
                    base_mean,
                    "" if pct is None else pct,
                    "" if pct is None else pct,
                )
            avg_pct = table.avg_pct_change(setting, metric)
            pct_of_avg = table.pct_change_of_avg(setting, metric)
            yield (
                SCHEMA_VERSION,
                setting,
                "all",
                metric,
                table.avg_mean(setting, metric),
                table.avg_mean(BASE_SETTING, metric),
                "" if avg_pct is None else avg_pct,
                "" if pct_of_avg is None else pct_of_avg,
            )


def _write_summaries(
    out_dir: Path, summaries: dict[str, ExperimentSummary]
) -> None:
    for setting, summary in summaries.items():
        name = "summary.json" if setting == BASE_SETTING else f"summary-{setting}.json"
        doc = summary.to_json_dict()
        doc["setting"] = setting
        (out_dir / name).write_text(
            json.dumps(doc, sort_keys=True, indent=2) + "\n",
            encoding="utf-8",
            newline="\n",
        )
    _write_csv(
        out_dir / "trials.csv",
        TRIALS_CSV_COLUMNS,
        (
            row
            for setting in summaries
            for row in _trials_rows(setting, summaries[setting])
        ),
    )
    _write_csv(
        out_dir / "mods.csv",
        MODS_CSV_COLUMNS,
        (
            row
            for setting in summaries
            for row in _mods_rows(setting, summaries[setting])
        ),
    )


def _print_cell_table(summary: ExperimentSummary) -> None:
    header = (
        f"{'k':>3} {'completion':>11} {'optimal':>8} {'collisions':>11} "
        f"{'seen/mod':>9} {'done/mod':>9} {'done%':>6}"
    )
    print(header)
    for cell in summary.cells:
        s = cell.stats
        print(
            f"{cell.team_size:>3} {s['completion_time'].mean:>11.1f} "
            f"{cell.optimal.completion_time_lower_bound:>8.1f} "
            f"{s['collisions'].mean:>11.1f} {s['mean_reports_seen'].mean:>9.1f} "
            f"{s['mean_reports_completed'].mean:>9.1f} "
            f"{s['pct_completed_of_seen'].mean:>6.1f}"
        )


def _load_config(path: str) -> ExperimentConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        raise SystemExit(2) from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        print(
            f"error: malformed JSON in {path} at line {exc.lineno} column {exc.colno}: {exc.msg}",
            file=sys.stderr,
        )
        raise SystemExit(1) from exc
    try:
        config = config_from_dict(data)
        validate_config(config)
    except ConfigError as exc:
        for violation in exc.violations:
            print(f"error: {violation}", file=sys.stderr)
        raise SystemExit(1) from exc
    return config


def _apply_overrides(config: ExperimentConfig, args: argparse.Namespace) -> ExperimentConfig:
    if args.seed is not None:
        config = replace(config, master_seed=args.seed)
    if args.trials is not None:
        config = replace(config, trials=args.trials)
    try:
        return validate_config(config)
    except ConfigError as exc:
        for violation in exc.violations:
            print(f"error: {violation}", file=sys.stderr)
        raise SystemExit(1) from exc


def _prepare_output_dir(path: str) -> Path:
    out_dir = Path(path)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        probe = out_dir / ".write-probe"
        probe.write_text("", encoding="utf-8")
        probe.unlink()
    except OSError as exc:
        print(f"error: cannot write to output dir {path}: {exc}", file=sys.stderr)
        raise SystemExit(2) from exc
    return out_dir


def _event_writer(out_dir: Path):
    """Appends one JSON line per engine event to events.jsonl."""
    events_path = out_dir / "events.jsonl"
    handle = events_path.open("w", encoding="utf-8", newline="\n")

    def factory(team_size: int, trial: int):
        def sink(t: int, mod: int, action: str, report: int) -> None:
            handle.write(
                json.dumps(
                    {
                        "team_size": team_size,
                        "trial": trial,
                        "t": t,
                        "mod": mod,
                        "action": action,
                        "report": report,
                    },
                    sort_keys=True,
                )
                + "\n"
            )

        return sink

    return factory, handle


def _run_and_write(config: ExperimentConfig, args: argparse.Namespace) -> int:
    out_dir = _prepare_output_dir(args.output)
    factory = handle = None
    if args.events:
        factory, handle = _event_writer(out_dir)
    try:
        jobs = 1 if args.events else args.jobs
        summary = run_experiment(config, jobs=jobs, event_sink_factory=factory)
    finally:
        if handle is not None:
            handle.close()
    try:
        _write_summaries(out_dir, {BASE_SETTING: summary})
    except OSError as exc:
        print(f"error: writing outputs failed: {exc}", file=sys.stderr)
        return 2
    _print_cell_table(summary)
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    config = _apply_overrides(_load_config(args.config), args)
    return _run_and_write(config, args)


def cmd_baseline(args: argparse.Namespace) -> int:
    config = replace(baseline_preset(), master_seed=DEFAULT_SEED)
    config = _apply_overrides(config, args)
    return _run_and_write(config, args)


def cmd_compare(args: argparse.Namespace) -> int:
    base = _apply_overrides(_load_config(args.config), args)
    out_dir = _prepare_output_dir(args.output)
    variants = {}
    for spec in args.variants:
        try:
            variants[spec] = apply_variant_spec(base, spec)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
    table = compare_interventions(base, variants, jobs=args.jobs)
    try:
        _write_summaries(out_dir, dict(table.summaries))
        _write_csv(out_dir / "comparison.csv", COMPARISON_CSV_COLUMNS, _comparison_rows(table))
    except OSError as exc:
        print(f"error: writing outputs failed: {exc}", file=sys.stderr)
        return 2
    for setting in table.settings:
        if setting == BASE_SETTING:
            continue
        coll = table.avg_pct_change(setting, "collisions")
        time_ = table.avg_pct_change(setting, "completion_time")
        coll_s = "n/a" if coll is None else f"{coll:+.2f}%"
        time_s = "n/a" if time_ is None else f"{time_:+.2f}%"
        print(f"{setting}: collisions {coll_s}, completion time {time_s} vs base")
    return 0


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=None, help="master seed (default: config value)")
    parser.add_argument("--trials", type=int, default=None, help="override trials per cell")
    parser.add_argument("--jobs", type=int, default=1, help="max concurrent team-size cells")
    parser.add_argument("--output", default="out", help="output directory")
    parser.add_argument("--events", action="store_true", help="emit per-trial event log (events.jsonl)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modqueue-sim",
        description="Agent-based moderation-queue simulator and experiment harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment from a JSON config")
    p_run.add_argument("config")
    _add_common_flags(p_run)
    p_run.set_defaults(func=cmd_run)

    p_base = sub.add_parser("baseline", help="run the built-in baseline preset")
    _add_common_flags(p_base)
    p_base.set_defaults(func=cmd_baseline)

    p_cmp = sub.add_parser("compare", help="run a config plus named intervention variants")
    p_cmp.add_argument("config")
    p_cmp.add_argument(
        "variants",
        nargs="*",
        help="variant specs: reverse, random, distribute-toxicity, awareness=<v>; compose with '+'",
    )
    _add_common_flags(p_cmp)
    p_cmp.set_defaults(func=cmd_compare)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
