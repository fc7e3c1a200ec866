"""Training-curve figures with rolling mean and std bands."""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .io import read_curve_csv
from .rolling import rolling_stats
from .style import COLORS, plt, save_figure

DEFAULT_WINDOW = 300


@dataclass
class CurveSpec:
    """Inputs and options for one training-curve figure."""

    csv_paths: list
    output: Path
    labels: list = field(default_factory=list)
    window: int = DEFAULT_WINDOW

    def __post_init__(self):
        if self.window < 1:
            raise ValueError("window must be >= 1")
        if not self.csv_paths:
            raise ValueError("need at least one curve CSV")
        self.csv_paths = [Path(p) for p in self.csv_paths]
        for p in self.csv_paths:
            if not p.exists():
                raise FileNotFoundError(p)
        if not self.labels:
            self.labels = [p.stem for p in self.csv_paths]
        if len(self.labels) != len(self.csv_paths):
            raise ValueError("one label per CSV required")
        self.output = Path(self.output)


def plot_training_curves(spec: CurveSpec) -> Path:
    """One smoothed line per input with a +/-1 std shaded band."""
    fig, ax = plt.subplots()
    for i, (path, label) in enumerate(zip(spec.csv_paths, spec.labels)):
        curve = read_curve_csv(path)
        means, stds = rolling_stats(curve["reward"], spec.window)
        color = COLORS[i % len(COLORS)]
        ax.plot(curve["step"], means, label=label, color=color)
        ax.fill_between(
            curve["step"], means - stds, means + stds, color=color, alpha=0.25, lw=0
        )
    ax.set_xlabel("step")
    ax.set_ylabel("sum rate (bits/s/Hz)")
    ax.legend()
    return save_figure(fig, spec.output)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="risplots-curves",
        description="Render smoothed training curves from risbandit curve CSVs.",
    )
    parser.add_argument("--csv", action="append", required=True, help="curve CSV (repeatable)")
    parser.add_argument("--label", action="append", default=None, help="legend label per CSV")
    parser.add_argument("--window", type=int, default=DEFAULT_WINDOW)
    parser.add_argument("--out", required=True, help="output image (.png or .svg)")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        spec = CurveSpec(
            csv_paths=args.csv,
            output=args.out,
            labels=args.label or [],
            window=args.window,
        )
        out = plot_training_curves(spec)
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    print(f"wrote {out} (+ vector twin)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
