"""Grouped sum-rate bars across RIS sizes."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .io import read_summary, summary_methods
from .style import COLORS, plt, save_figure


def _grouped_rates(summaries) -> tuple[list, list[str], dict]:
    """Collect {sweep value -> {method -> rate}} from summary files.

    Summaries sharing an n_tot merge into one group (e.g. one file per
    agent); every group must end up with the identical method set.
    """
    groups: dict[float, dict[str, float]] = {}
    for path in summaries:
        doc = read_summary(path)
        value = doc["config"]["system"]["n_tot"]
        bucket = groups.setdefault(value, {})
        for method, rate in summary_methods(doc).items():
            if method in bucket and bucket[method] != rate:
                raise ValueError(
                    f"{path}: conflicting rate for method {method!r} at n_tot={value}"
                )
            bucket[method] = rate
    values = sorted(groups)
    method_sets = {frozenset(groups[v]) for v in values}
    if len(method_sets) != 1:
        detail = {v: sorted(groups[v]) for v in values}
        raise ValueError(f"inconsistent method sets across sweep points: {detail}")
    methods = sorted(next(iter(method_sets)))
    # keep the oracle visually last in each group
    if "oracle" in methods:
        methods.remove("oracle")
        methods.append("oracle")
    return values, methods, groups


def plot_rate_bars(summaries, output) -> Path:
    """One bar group per RIS size, one bar per method, oracle on top."""
    if not summaries:
        raise ValueError("need at least one summary file")
    values, methods, groups = _grouped_rates(summaries)
    fig, ax = plt.subplots()
    x = np.arange(len(values))
    width = 0.8 / len(methods)
    for j, method in enumerate(methods):
        rates = [groups[v][method] for v in values]
        offset = (j - (len(methods) - 1) / 2) * width
        ax.bar(x + offset, rates, width=width, label=method, color=COLORS[j % len(COLORS)])
    ax.set_xticks(x)
    ax.set_xticklabels([f"{v:g}" for v in values])
    ax.set_xlabel("total RIS elements")
    ax.set_ylabel("average sum rate (bits/s/Hz)")
    ax.legend()
    return save_figure(fig, Path(output))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="risplots-bars",
        description="Render grouped sum-rate bars from risbandit summaries.",
    )
    parser.add_argument(
        "--summary", action="append", required=True, help="summary JSON (repeatable)"
    )
    parser.add_argument("--out", required=True, help="output image (.png or .svg)")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        out = plot_rate_bars(args.summary, args.out)
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    print(f"wrote {out} (+ vector twin)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
