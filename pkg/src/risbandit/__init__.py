"""Desk-scale simulation of learned precoder/RIS-phase selection in a
multi-user MISO downlink with Ricean fading."""

__version__ = "0.1.0"

from .channels import (
    ChannelSet,
    Geometry,
    Position3D,
    RiceanParams,
    sample_channel_set,
)
from .environment import (
    Action,
    ActionSpace,
    SystemConfig,
    build_action_space,
    build_codebook,
    env_step,
    exhaustive_best,
    flatten_state,
    sum_rate,
)
from .harness import (
    ExperimentConfig,
    RunResult,
    evaluate,
    normalized_rate,
    rolling_mean,
    run_experiment,
    sweep,
    train,
)

__all__ = [
    "Action",
    "ActionSpace",
    "ChannelSet",
    "ExperimentConfig",
    "Geometry",
    "Position3D",
    "RiceanParams",
    "RunResult",
    "SystemConfig",
    "build_action_space",
    "build_codebook",
    "env_step",
    "evaluate",
    "exhaustive_best",
    "flatten_state",
    "normalized_rate",
    "rolling_mean",
    "run_experiment",
    "sample_channel_set",
    "sum_rate",
    "sweep",
    "train",
]
