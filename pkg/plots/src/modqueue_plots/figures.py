"""The three figure builders: efficiency curves, workload bars, toxicity heatmaps.

Each function reads one CSV, writes one image, and returns the output path.
Output filenames are deterministic: an explicit suffix on ``out`` wins,
otherwise the requested format's extension is appended. Input files are
never modified.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd

from .data import load_mods, load_trials

NA_COLOR = "#b0b0b0"  # distinct fill for cells with no defined value


def resolve_out_path(out: str | Path, fmt: str) -> Path:
    path = Path(out)
    if path.suffix:
        return path
    return path.with_suffix(f".{fmt}")


def pct_label(seen_mean: float, completed_mean: float) -> str:
    """Completed-of-seen annotation: 100 * completed/seen, one decimal."""
    if seen_mean <= 0:
        return "n/a"
    return f"{100.0 * completed_mean / seen_mean:.1f}%"


def efficiency_figure(frame: pd.DataFrame):
    """Build the two-panel efficiency figure from a loaded trials frame."""
    grouped = (
        frame.groupby(["setting", "team_size"])[["collisions", "completion_time"]]
        .mean()
        .reset_index()
    )
    optimal = frame.groupby("team_size")["optimal_lb"].first().reset_index()

    fig, (ax_coll, ax_time) = plt.subplots(1, 2, figsize=(11, 4.5))
    for setting, block in grouped.groupby("setting"):
        ax_coll.plot(block["team_size"], block["collisions"], marker="o", label=setting)
        ax_time.plot(
            block["team_size"], block["completion_time"], marker="o", label=setting
        )
    ax_time.plot(
        optimal["team_size"],
        optimal["optimal_lb"],
        linestyle="--",
        color="black",
        label="optimal",
    )
    ax_coll.set_xlabel("team size")
    ax_coll.set_ylabel("mean collisions")
    ax_coll.set_title("Collisions")
    ax_time.set_xlabel("team size")
    ax_time.set_ylabel("mean completion time")
    ax_time.set_title("Completion time")
    for ax in (ax_coll, ax_time):
        ax.legend()
        ax.grid(True, alpha=0.3)
    return fig


def plot_efficiency(trials_csv: str | Path, out: str | Path, fmt: str = "png") -> Path:
    """Mean collisions and completion time vs team size, one curve per setting,
    with the optimal completion-time lower bound overlaid."""
    fig = efficiency_figure(load_trials(trials_csv))
    out_path = resolve_out_path(out, fmt)
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return out_path


def plot_workload(mods_csv: str | Path, out: str | Path, fmt: str = "png") -> Path:
    """Grouped bars of mean reports seen vs completed per team size, annotated
    with the completed/seen percentage, plus work time vs non-redundant time."""
    frame = load_mods(mods_csv)
    frame = frame.assign(useful_time=frame["work_time"] - frame["redundant_time"])
    settings = list(dict.fromkeys(frame["setting"]))

    fig, axes = plt.subplots(
        len(settings), 2, figsize=(11, 4.0 * len(settings)), squeeze=False
    )
    for row, setting in enumerate(settings):
        block = frame[frame["setting"] == setting]
        cell = (
            block.groupby("team_size")[
                ["reports_seen", "reports_completed", "work_time", "useful_time"]
            ]
            .mean()
            .reset_index()
        )
        x = np.arange(len(cell))
        width = 0.38

        ax = axes[row][0]
        ax.bar(x - width / 2, cell["reports_seen"], width, label="seen")
        bars = ax.bar(x + width / 2, cell["reports_completed"], width, label="completed")
        for i, bar in enumerate(bars):
            label = pct_label(cell["reports_seen"][i], cell["reports_completed"][i])
            ax.annotate(
                label,
                (bar.get_x() + bar.get_width() / 2, bar.get_height()),
                ha="center",
                va="bottom",
                fontsize=8,
            )
        ax.set_xticks(x, cell["team_size"])
        ax.set_xlabel("team size")
        ax.set_ylabel("reports per mod")
        ax.set_title(f"{setting}: reports seen vs completed")
        ax.legend()

        ax = axes[row][1]
        ax.bar(x - width / 2, cell["work_time"], width, label="work time")
        bars = ax.bar(x + width / 2, cell["useful_time"], width, label="non-redundant")
        for i, bar in enumerate(bars):
            label = pct_label(cell["work_time"][i], cell["useful_time"][i])
            ax.annotate(
                label,
                (bar.get_x() + bar.get_width() / 2, bar.get_height()),
                ha="center",
                va="bottom",
                fontsize=8,
            )
        ax.set_xticks(x, cell["team_size"])
        ax.set_xlabel("team size")
        ax.set_ylabel("ticks per mod")
        ax.set_title(f"{setting}: work time vs non-redundant time")
        ax.legend()

    out_path = resolve_out_path(out, fmt)
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return out_path


def toxic_pct_matrix(frame: pd.DataFrame) -> pd.DataFrame:
    """Mean per-mod toxic completed/seen percentage by (team_size, setting).

    Mods with toxic_seen == 0 have no defined ratio and are excluded; a cell
    with no qualifying mods at all stays NaN.
    """
    qualifying = frame[frame["toxic_seen"] > 0].assign(
        toxic_pct=lambda f: 100.0 * f["toxic_completed"] / f["toxic_seen"]
    )
    matrix = qualifying.pivot_table(
        index="team_size", columns="setting", values="toxic_pct", aggfunc="mean"
    )
    # keep every (team_size, setting) cell present even if all-NaN
    settings = list(dict.fromkeys(frame["setting"]))
    sizes = sorted(frame["team_size"].unique())
    return matrix.reindex(index=sizes, columns=settings)


def _draw_heatmap(ax, matrix: pd.DataFrame, title: str, fmt_value) -> None:
    values = np.ma.masked_invalid(matrix.to_numpy(dtype=float))
    mask = np.ma.getmaskarray(values)
    cmap = plt.get_cmap("viridis").copy()
    cmap.set_bad(NA_COLOR)
    image = ax.imshow(values, cmap=cmap, aspect="auto")
    ax.set_xticks(range(len(matrix.columns)), matrix.columns, rotation=30, ha="right")
    ax.set_yticks(range(len(matrix.index)), matrix.index)
    ax.set_xlabel("setting")
    ax.set_ylabel("team size")
    ax.set_title(title)
    for i in range(values.shape[0]):
        for j in range(values.shape[1]):
            if mask[i, j]:
                ax.text(j, i, "n/a", ha="center", va="center", fontsize=8)
            else:
                ax.text(j, i, fmt_value(values[i, j]), ha="center", va="center", fontsize=8)
    ax.figure.colorbar(image, ax=ax, shrink=0.8)


def plot_toxicity_heatmaps(mods_csv: str | Path, out: str | Path, fmt: str = "png") -> Path:
    """Heatmaps over (team size x setting): toxic completed/seen percentage and
    mean longest toxic run. Cells with no toxic reports seen render as 'n/a'."""
    frame = load_mods(mods_csv)
    pct = toxic_pct_matrix(frame)
    runs = frame.pivot_table(
        index="team_size", columns="setting", values="longest_toxic_run", aggfunc="mean"
    ).reindex(index=pct.index, columns=pct.columns)

    fig, (ax_pct, ax_runs) = plt.subplots(1, 2, figsize=(12, 4.5))
    _draw_heatmap(ax_pct, pct, "toxic completed / toxic seen (%)", lambda v: f"{v:.1f}")
    _draw_heatmap(ax_runs, runs, "mean longest toxic run", lambda v: f"{v:.2f}")
    out_path = resolve_out_path(out, fmt)
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return out_path
