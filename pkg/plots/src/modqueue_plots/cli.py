"""``plots`` command line: render figures from simulator CSV outputs.

  plots efficiency         --input trials.csv --out fig [--format png|svg]
  plots workload           --input mods.csv   --out fig [--format png|svg]
  plots toxicity-heatmaps  --input mods.csv   --out fig [--format png|svg]
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from .data import PlotInputError
from .figures import plot_efficiency, plot_toxicity_heatmaps, plot_workload

_COMMANDS = {
    "efficiency": plot_efficiency,
    "workload": plot_workload,
    "toxicity-heatmaps": plot_toxicity_heatmaps,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plots", description="Render figures from modqueue-sim CSV results"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, func in _COMMANDS.items():
        p = sub.add_parser(name, help=func.__doc__.splitlines()[0] if func.__doc__ else None)
        p.add_argument("--input", required=True, help="input CSV path")
        p.add_argument("--out", required=True, help="output image path (extension optional)")
        p.add_argument("--format", choices=("png", "svg"), default="png")
        p.set_defaults(func=func)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out_path = args.func(args.input, args.out, args.format)
    except PlotInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(out_path)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
