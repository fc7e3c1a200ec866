import json

import pytest

from risbandit.cli import main as risbandit_main
from risbandit.config import config_from_document
from risbandit.harness import config_document


def write_config(path, **tweaks):
    from dataclasses import replace

    ec = replace(
        config_from_document({"system": {"n_tot": 8, "n_group": 4}}), **tweaks
    )
    path.write_text(json.dumps(config_document(ec)))
    return path


@pytest.fixture(scope="session")
def run_artifacts(tmp_path_factory):
    """One small real run: two seeds of training curves plus a summary."""
    root = tmp_path_factory.mktemp("run")
    cfg = write_config(
        root / "config.json",
        agent_kind="drp",
        seeds=(0, 1),
        train_steps=40,
        eval_steps=5,
    )
    out = root / "out"
    assert risbandit_main(["run", "--config", str(cfg), "--out", str(out)]) == 0
    return {
        "summary": out / "summary.json",
        "curves": [out / "curves/drp_seed0.csv", out / "curves/drp_seed1.csv"],
    }


@pytest.fixture(scope="session")
def power_sweep_summaries(tmp_path_factory):
    """Five summaries, one per Table-style power point."""
    root = tmp_path_factory.mktemp("power")
    cfg = write_config(
        root / "config.json", agent_kind="random", seeds=(0,), eval_steps=4
    )
    out = root / "out"
    code = risbandit_main(
        [
            "sweep",
            "--dimension",
            "power",
            "--values",
            "10,20,30,40,50",
            "--config",
            str(cfg),
            "--out",
            str(out),
        ]
    )
    assert code == 0
    return [out / f"power_{v}" / "summary.json" for v in (10, 20, 30, 40, 50)]


@pytest.fixture(scope="session")
def element_sweep_summaries(tmp_path_factory):
    """Two summaries across RIS sizes for the grouped-bar tests."""
    root = tmp_path_factory.mktemp("elements")
    cfg = write_config(
        root / "config.json", agent_kind="random", seeds=(0,), eval_steps=4
    )
    out = root / "out"
    code = risbandit_main(
        [
            "sweep",
            "--dimension",
            "elements",
            "--values",
            "8,16",
            "--config",
            str(cfg),
            "--out",
            str(out),
        ]
    )
    assert code == 0
    return [out / "elements_8" / "summary.json", out / "elements_16" / "summary.json"]
