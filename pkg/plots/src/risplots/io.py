"""Readers for the risbandit artifact schemas (CSV curves, JSON summaries)."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

CURVE_COLUMNS = ("step", "action_index", "reward")
SUMMARY_SCHEMA = "risbandit-summary-v1"


class SchemaError(ValueError):
    """Input file does not match the documented artifact schema."""


def read_curve_csv(path) -> dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file, expected header") from None
        for column in CURVE_COLUMNS:
            if column not in header:
                raise SchemaError(f"{path}: missing column {column!r}")
        index = {c: header.index(c) for c in CURVE_COLUMNS}
        rows = list(reader)
    return {
        "step": np.array([int(r[index["step"]]) for r in rows]),
        "action_index": np.array([int(r[index["action_index"]]) for r in rows]),
        "reward": np.array([float(r[index["reward"]]) for r in rows]),
    }


def read_summary(path) -> dict:
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("schema") != SUMMARY_SCHEMA:
        raise SchemaError(
            f"{path}: schema {doc.get('schema')!r}, expected {SUMMARY_SCHEMA!r}"
        )
    return doc


def summary_methods(doc: dict) -> dict[str, float]:
    """Absolute eval-mean rate per method contained in one summary."""
    methods = {doc["agent"]: doc["eval_mean_avg"], "random": doc["random_mean"]}
    if doc.get("oracle_mean") is not None:
        methods["oracle"] = doc["oracle_mean"]
    return methods


def default_sibling(path: Path) -> Path:
    """The matching vector/raster twin of an output image path."""
    return path.with_suffix(".svg" if path.suffix == ".png" else ".png")
