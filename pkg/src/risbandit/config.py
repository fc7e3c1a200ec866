"""Config file parsing and validation.

A config is one JSON document with three optional sections (system,
agent, experiment); every omitted key takes the default simulation value,
so an empty document is a complete desk-scale configuration. Unknown keys
are rejected rather than ignored.
"""

from __future__ import annotations

import json
from pathlib import Path

from .channels import Geometry, Position3D, RiceanParams, ris_panel_shape
from .environment import SystemConfig, build_codebook
from .harness import ExperimentConfig

DEFAULTS: dict = {
    "system": {
        "bs_position": [10.0, 5.0, 2.0],
        "ris_positions": [[7.5, 13.0, 2.0], [12.5, 13.0, 2.0]],
        "ue_positions": [
            [8.775, 14.394, 1.634],
            [9.648, 13.281, 1.632],
        ],
        "bs_antennas": 4,
        "n_tot": 32,
        "n_group": 16,
        "kappa1_db": 30.0,
        "kappa2_db": 30.0,
        "carrier_hz": 35e9,
        "power_dbm": 40.0,
        "noise_dbm": -110.0,
    },
    "agent": {
        "kind": "drp",
        "epsilon": 0.3,
        "dropout": 0.2,
        "hidden_sizes": [64, 64, 32, 32],
        "learning_rate": None,
        "batch_size": 128,
        "gamma": 0.0,
        "tau": 0.18,
        "target_update_freq": 100,
        "buffer_capacity": 100_000,
        "clip_delta": None,
        "prioritized_replay": False,
        "optimizer": "adam",
    },
    "experiment": {
        "train_steps": None,
        "ucb_train_steps": None,
        "eval_steps": 300,
        "seeds": [0, 1, 2, 3, 4],
        "eval_seed": 1234567,
        "compute_oracle": True,
    },
}


class ConfigError(ValueError):
    """Raised for malformed or invalid configuration documents."""


def _merge_section(name: str, overrides: dict) -> dict:
    base = dict(DEFAULTS[name])
    unknown = set(overrides) - set(base)
    if unknown:
        raise ConfigError(
            f"unknown key(s) in section {name!r}: {', '.join(sorted(unknown))}"
        )
    base.update(overrides)
    return base


def _position(values, label: str) -> Position3D:
    if len(values) != 3:
        raise ConfigError(f"{label} must have 3 coordinates, got {values}")
    return Position3D(*(float(v) for v in values))


def config_from_document(doc: dict) -> ExperimentConfig:
    """Validate a parsed JSON document and build the experiment config."""
    if not isinstance(doc, dict):
        raise ConfigError(f"config root must be an object, got {type(doc).__name__}")
    unknown = set(doc) - set(DEFAULTS)
    if unknown:
        raise ConfigError(f"unknown top-level key(s): {', '.join(sorted(unknown))}")
    sys_doc = _merge_section("system", doc.get("system", {}))
    agent_doc = _merge_section("agent", doc.get("agent", {}))
    exp_doc = _merge_section("experiment", doc.get("experiment", {}))

    n_ris = len(sys_doc["ris_positions"])
    if n_ris < 1:
        raise ConfigError("need at least one RIS position")
    n_tot = int(sys_doc["n_tot"])
    if n_tot % n_ris != 0:
        raise ConfigError(f"n_tot={n_tot} not divisible by number of RISs {n_ris}")
    rows, cols = ris_panel_shape(n_tot // n_ris)
    geometry = Geometry(
        bs=_position(sys_doc["bs_position"], "bs_position"),
        ris=tuple(
            _position(p, f"ris_positions[{i}]")
            for i, p in enumerate(sys_doc["ris_positions"])
        ),
        ues=tuple(
            _position(p, f"ue_positions[{i}]")
            for i, p in enumerate(sys_doc["ue_positions"])
        ),
        bs_antennas=int(sys_doc["bs_antennas"]),
        ris_rows=rows,
        ris_cols=cols,
    )
    ricean = RiceanParams(
        kappa1_db=float(sys_doc["kappa1_db"]),
        kappa2_db=float(sys_doc["kappa2_db"]),
        carrier_hz=float(sys_doc["carrier_hz"]),
    )
    try:
        system = SystemConfig(
            geometry=geometry,
            ricean=ricean,
            n_group=int(sys_doc["n_group"]),
            power_dbm=float(sys_doc["power_dbm"]),
            noise_dbm=float(sys_doc["noise_dbm"]),
            codebook=build_codebook(geometry.bs_antennas, geometry.n_ues),
        )
        return ExperimentConfig(
            system=system,
            agent_kind=str(agent_doc["kind"]),
            epsilon=float(agent_doc["epsilon"]),
            dropout_p=float(agent_doc["dropout"]),
            hidden_sizes=tuple(int(h) for h in agent_doc["hidden_sizes"]),
            learning_rate=(
                None
                if agent_doc["learning_rate"] is None
                else float(agent_doc["learning_rate"])
            ),
            batch_size=int(agent_doc["batch_size"]),
            gamma=float(agent_doc["gamma"]),
            tau=float(agent_doc["tau"]),
            target_update_freq=int(agent_doc["target_update_freq"]),
            buffer_capacity=int(agent_doc["buffer_capacity"]),
            clip_delta=(
                None
                if agent_doc["clip_delta"] is None
                else float(agent_doc["clip_delta"])
            ),
            prioritized_replay=bool(agent_doc["prioritized_replay"]),
            optimizer=str(agent_doc["optimizer"]),
            train_steps=(
                None
                if exp_doc["train_steps"] is None
                else int(exp_doc["train_steps"])
            ),
            ucb_train_steps=(
                None
                if exp_doc["ucb_train_steps"] is None
                else int(exp_doc["ucb_train_steps"])
            ),
            eval_steps=int(exp_doc["eval_steps"]),
            seeds=tuple(int(s) for s in exp_doc["seeds"]),
            eval_seed=int(exp_doc["eval_seed"]),
            compute_oracle=bool(exp_doc["compute_oracle"]),
        )
    except ValueError as err:
        if isinstance(err, ConfigError):
            raise
        raise ConfigError(str(err)) from err


def parse_config(path) -> ExperimentConfig:
    """Read and validate a JSON config file."""
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigError(f"{path}: invalid JSON at line {err.lineno}: {err.msg}") from err
    return config_from_document(doc)
