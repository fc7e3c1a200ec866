"""Bit-stable result artifacts.

Two formats, both documented here and consumed by the plotting scripts:

Training curve CSV (one per agent/seed)
    header ``step,action_index,reward``; one row per training step;
    rewards printed with 17 significant digits so identical runs produce
    byte-identical files.

Summary JSON (one per experiment)
    schema ``risbandit-summary-v1``; keys sorted; floats in shortest
    round-trip form. Holds per-seed eval means, normalized rates,
    baselines, the full config document, its fingerprint, and relative
    paths of every curve file the run wrote. Wall-clock time is
    deliberately excluded so artifacts stay byte-comparable.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from . import __version__
from .harness import MetricsLog, RunResult

SUMMARY_SCHEMA = "risbandit-summary-v1"
CSV_HEADER = ("step", "action_index", "reward")


def write_training_csv(log: MetricsLog, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(CSV_HEADER) + "\n")
        for step, action_idx, reward in zip(
            log.steps, log.action_indices, log.rewards
        ):
            fh.write(f"{step},{action_idx},{reward:.17g}\n")


def read_training_csv(path) -> dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {header}, want {CSV_HEADER}")
        rows = list(reader)
    return {
        "step": np.array([int(r[0]) for r in rows]),
        "action_index": np.array([int(r[1]) for r in rows]),
        "reward": np.array([float(r[2]) for r in rows]),
    }


def summary_dict(result: RunResult, curve_files: dict[int, str] | None = None) -> dict:
    return {
        "schema": SUMMARY_SCHEMA,
        "agent": result.agent_kind,
        "train_steps": result.train_steps,
        "eval_steps": result.eval_steps,
        "seeds": list(result.seeds),
        "eval_means": {str(s): result.eval_means[s] for s in result.seeds},
        "eval_mean_avg": result.eval_mean_avg,
        "eval_mean_std": result.eval_mean_std,
        "random_mean": result.random_mean,
        "oracle_mean": result.oracle_mean,
        "normalized": {str(s): v for s, v in result.normalized.items()},
        "normalized_avg": result.normalized_avg,
        "normalized_std": result.normalized_std,
        "config": result.config_doc,
        "fingerprint": result.fingerprint,
        "curves": {str(s): p for s, p in (curve_files or {}).items()},
        "versions": {"risbandit": __version__, "numpy": np.__version__},
    }


def write_summary_json(
    result: RunResult, path, curve_files: dict[int, str] | None = None
) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    doc = summary_dict(result, curve_files)
    with open(path, "w", newline="\n") as fh:
        json.dump(doc, fh, sort_keys=True, indent=2)
        fh.write("\n")


def read_summary_json(path) -> dict:
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("schema") != SUMMARY_SCHEMA:
        raise ValueError(f"unexpected summary schema {doc.get('schema')!r}")
    return doc


def write_result_bundle(result: RunResult, out_dir) -> Path:
    """Write curves plus a summary referencing them; returns summary path."""
    out_dir = Path(out_dir)
    curve_files: dict[int, str] = {}
    for seed in result.seeds:
        rel = f"curves/{result.agent_kind}_seed{seed}.csv"
        write_training_csv(result.train_logs[seed], out_dir / rel)
        curve_files[seed] = rel
    summary_path = out_dir / "summary.json"
    write_summary_json(result, summary_path, curve_files)
    return summary_path
