"""Normalized-rate table across transmit powers (markdown output)."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .io import read_summary


def _normalized_methods(doc: dict, path) -> dict[str, float]:
    if doc.get("oracle_mean") is None:
        raise ValueError(f"{path}: summary lacks an oracle mean to normalize by")
    oracle = doc["oracle_mean"]
    return {
        doc["agent"]: doc["eval_mean_avg"] / oracle,
        "random": doc["random_mean"] / oracle,
        "oracle": 1.0,
    }


def emit_power_table(summaries) -> str:
    """Markdown table: one row per method, one column per power value."""
    if not summaries:
        raise ValueError("need at least one summary file")
    cells: dict[str, dict[float, float]] = {}
    powers: list[float] = []
    for path in summaries:
        doc = read_summary(path)
        power = float(doc["config"]["system"]["power_dbm"])
        if power not in powers:
            powers.append(power)
        for method, value in _normalized_methods(doc, path).items():
            cells.setdefault(method, {})[power] = value
    powers.sort()
    for method, row in cells.items():
        missing = [p for p in powers if p not in row]
        if missing:
            raise ValueError(
                f"method {method!r} has no summary for power point(s) "
                f"{', '.join(f'{p:g}' for p in missing)}"
            )
    methods = sorted(m for m in cells if m != "oracle") + ["oracle"]
    header = "| Method | " + " | ".join(f"{p:g} dBm" for p in powers) + " |"
    rule = "|---" * (len(powers) + 1) + "|"
    lines = [header, rule]
    for method in methods:
        row = " | ".join(f"{cells[method][p]:.3f}" for p in powers)
        lines.append(f"| {method} | {row} |")
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="risplots-table",
        description="Emit a normalized-rate table from risbandit summaries.",
    )
    parser.add_argument(
        "--summary", action="append", required=True, help="summary JSON (repeatable)"
    )
    parser.add_argument("--out", help="write markdown here instead of stdout")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        table = emit_power_table(args.summary)
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    if args.out:
        Path(args.out).write_text(table)
        print(f"wrote {args.out}")
    else:
        print(table, end="")
    return 0


if __name__ == "__main__":
    sys.exit(main())
