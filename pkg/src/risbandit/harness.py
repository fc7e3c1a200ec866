"""Experiment protocol: train, deterministic evaluation, baselines, sweeps.

A run trains a fresh agent per seed with epsilon-greedy exploration
active throughout, then evaluates its deterministic policy on a dedicated
evaluation channel stream. The same stream (one eval seed per experiment)
scores the random baseline and the exhaustive-search oracle, so
normalized rates always compare like-for-like on identical channel draws.
Everything downstream of (config, seed) is deterministic.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .agents import Agent, DQNAgent, DRPAgent, OracleAgent, RandomAgent, UCBAgent
from .channels import Geometry, ris_panel_shape
from .environment import ActionSpace, SystemConfig, build_action_space, env_step
from .mlp import LayerSpec

DRP_LEARNING_RATE = 0.001
DQN_LEARNING_RATE = 0.0002
TRAIN_STEP_MULTIPLIER = 50
UCB_TRAIN_STEP_MULTIPLIER = 500
DEFAULT_EVAL_STEPS = 300
DEFAULT_SEEDS = (0, 1, 2, 3, 4)
DEFAULT_EVAL_SEED = 1234567


class MetricsLog:
    """Append-only (step, action index, reward) trajectory."""

    def __init__(self):
        self.steps: list[int] = []
        self.action_indices: list[int] = []
        self.rewards: list[float] = []

    def append(self, step: int, action_idx: int, reward: float) -> None:
        if self.steps and step <= self.steps[-1]:
            raise ValueError(f"step {step} not after {self.steps[-1]}")
        self.steps.append(step)
        self.action_indices.append(action_idx)
        self.rewards.append(reward)

    def __len__(self) -> int:
        return len(self.steps)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MetricsLog):
            return NotImplemented
        return (
            self.steps == other.steps
            and self.action_indices == other.action_indices
            and self.rewards == other.rewards
        )

    def reward_array(self) -> np.ndarray:
        return np.asarray(self.rewards, dtype=float)


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: a system, an agent, and the run schedule.

    train_steps=None resolves to 50*card(A) for the learning agents,
    500*card(A) for UCB, and 0 for the random/oracle baselines.
    learning_rate=None resolves to the per-agent default.
    """

    system: SystemConfig
    agent_kind: str = "drp"
    epsilon: float = 0.3
    dropout_p: float = 0.2
    hidden_sizes: tuple[int, ...] = (64, 64, 32, 32)
    learning_rate: float | None = None
    batch_size: int = 128
    gamma: float = 0.0
    tau: float = 0.18
    target_update_freq: int = 100
    buffer_capacity: int = 100_000
    clip_delta: float | None = None
    prioritized_replay: bool = False
    optimizer: str = "adam"
    train_steps: int | None = None
    ucb_train_steps: int | None = None
    eval_steps: int = DEFAULT_EVAL_STEPS
    seeds: tuple[int, ...] = DEFAULT_SEEDS
    eval_seed: int = DEFAULT_EVAL_SEED
    compute_oracle: bool = True

    def __post_init__(self):
        if self.agent_kind not in ("drp", "dqn", "ucb", "random", "oracle"):
            raise ValueError(f"unknown agent kind {self.agent_kind!r}")
        if not self.seeds:
            raise ValueError("at least one seed required")
        if self.eval_steps < 1:
            raise ValueError("eval_steps must be >= 1")
        if self.train_steps is not None and self.train_steps < 0:
            raise ValueError("train_steps must be >= 0")
        if self.ucb_train_steps is not None and self.ucb_train_steps < 0:
            raise ValueError("ucb_train_steps must be >= 0")

    def resolved_train_steps(self, cardinality: int) -> int:
        if self.agent_kind == "ucb":
            if self.ucb_train_steps is not None:
                return self.ucb_train_steps
            if self.train_steps is not None:
                return self.train_steps
            return UCB_TRAIN_STEP_MULTIPLIER * cardinality
        if self.train_steps is not None:
            return self.train_steps
        if self.agent_kind in ("drp", "dqn"):
            return TRAIN_STEP_MULTIPLIER * cardinality
        return 0

    def resolved_learning_rate(self) -> float:
        if self.learning_rate is not None:
            return self.learning_rate
        return DQN_LEARNING_RATE if self.agent_kind == "dqn" else DRP_LEARNING_RATE


def make_agent(ec: ExperimentConfig, space: ActionSpace, seed) -> Agent:
    """Fresh agent of the configured kind, seeded for this run."""
    kind = ec.agent_kind
    if kind == "random":
        return RandomAgent(space, seed)
    if kind == "ucb":
        return UCBAgent(space, seed)
    if kind == "oracle":
        return OracleAgent(space, ec.system)
    layer_spec = LayerSpec(
        sizes=(ec.system.state_dim, *ec.hidden_sizes, space.cardinality),
        dropout_p=ec.dropout_p,
    )
    if kind == "drp":
        return DRPAgent(
            space,
            layer_spec,
            epsilon=ec.epsilon,
            learning_rate=ec.resolved_learning_rate(),
            optimizer=ec.optimizer,
            seed=seed,
        )
    return DQNAgent(
        space,
        layer_spec,
        epsilon=ec.epsilon,
        learning_rate=ec.resolved_learning_rate(),
        batch_size=ec.batch_size,
        gamma=ec.gamma,
        tau=ec.tau,
        target_update_freq=ec.target_update_freq,
        buffer_capacity=ec.buffer_capacity,
        clip_delta=ec.clip_delta,
        prioritized_replay=ec.prioritized_replay,
        optimizer=ec.optimizer,
        seed=seed,
    )


def train(
    agent: Agent, cfg: SystemConfig, steps: int, rng: np.random.Generator
) -> MetricsLog:
    """Interact for `steps` coherence blocks with exploration active."""
    log = MetricsLog()
    if steps == 0:
        return log
    current = env_step(cfg, rng)
    for t in range(steps):
        action = agent.select(current.state)
        reward = current.reward(action)
        nxt = env_step(cfg, rng)
        agent.observe(current.state, action, reward, nxt.state)
        log.append(t, agent.space.encode(action), reward)
        current = nxt
    return log


def evaluate(
    agent: Agent, cfg: SystemConfig, steps: int, rng: np.random.Generator
) -> float:
    """Mean sum rate of the deterministic policy over fresh IID channels."""
    if steps < 1:
        raise ValueError("need at least one evaluation step")
    previous_mode = agent.mode
    agent.set_mode("eval")
    total = 0.0
    for _ in range(steps):
        step = env_step(cfg, rng)
        total += step.reward(agent.select(step.state))
    agent.set_mode(previous_mode)
    return total / steps


def normalized_rate(agent_mean: float, oracle_mean: float) -> float:
    """Agent rate as a fraction of the exhaustive-search rate."""
    if not oracle_mean > 0:
        raise ValueError(f"oracle mean must be positive, got {oracle_mean}")
    return agent_mean / oracle_mean


def rolling_mean(series, window: int) -> tuple[np.ndarray, np.ndarray]:
    """Trailing mean and std over the last `window` points (prefix warm-up)."""
    if window < 1:
        raise ValueError("window must be >= 1")
    values = np.asarray(series, dtype=float)
    means = np.empty(values.size)
    stds = np.empty(values.size)
    for i in range(values.size):
        chunk = values[max(0, i + 1 - window) : i + 1]
        means[i] = chunk.mean()
        stds[i] = chunk.std()
    return means, stds


@dataclass
class RunResult:
    """Everything one experiment produced, keyed by seed."""

    agent_kind: str
    seeds: tuple[int, ...]
    train_steps: int
    eval_steps: int
    train_logs: dict[int, MetricsLog]
    eval_means: dict[int, float]
    random_mean: float
    oracle_mean: float | None
    normalized: dict[int, float]
    fingerprint: str
    config_doc: dict
    wall_clock_s: float = field(compare=False, default=0.0)

    @property
    def eval_mean_avg(self) -> float:
        return float(np.mean(list(self.eval_means.values())))

    @property
    def eval_mean_std(self) -> float:
        return float(np.std(list(self.eval_means.values())))

    @property
    def normalized_avg(self) -> float | None:
        if not self.normalized:
            return None
        return float(np.mean(list(self.normalized.values())))

    @property
    def normalized_std(self) -> float | None:
        if not self.normalized:
            return None
        return float(np.std(list(self.normalized.values())))


def config_document(ec: ExperimentConfig) -> dict:
    """Canonical JSON-able document mirroring the config file schema."""
    geom = ec.system.geometry
    return {
        "system": {
            "bs_position": [geom.bs.x, geom.bs.y, geom.bs.z],
            "ris_positions": [[p.x, p.y, p.z] for p in geom.ris],
            "ue_positions": [[p.x, p.y, p.z] for p in geom.ues],
            "bs_antennas": geom.bs_antennas,
            "n_tot": ec.system.n_tot,
            "n_group": ec.system.n_group,
            "kappa1_db": ec.system.ricean.kappa1_db,
            "kappa2_db": ec.system.ricean.kappa2_db,
            "carrier_hz": ec.system.ricean.carrier_hz,
            "power_dbm": ec.system.power_dbm,
            "noise_dbm": ec.system.noise_dbm,
        },
        "agent": {
            "kind": ec.agent_kind,
            "epsilon": ec.epsilon,
            "dropout": ec.dropout_p,
            "hidden_sizes": list(ec.hidden_sizes),
            "learning_rate": ec.learning_rate,
            "batch_size": ec.batch_size,
            "gamma": ec.gamma,
            "tau": ec.tau,
            "target_update_freq": ec.target_update_freq,
            "buffer_capacity": ec.buffer_capacity,
            "clip_delta": ec.clip_delta,
            "prioritized_replay": ec.prioritized_replay,
            "optimizer": ec.optimizer,
        },
        "experiment": {
            "train_steps": ec.train_steps,
            "ucb_train_steps": ec.ucb_train_steps,
            "eval_steps": ec.eval_steps,
            "seeds": list(ec.seeds),
            "eval_seed": ec.eval_seed,
            "compute_oracle": ec.compute_oracle,
        },
    }


def config_fingerprint(ec: ExperimentConfig) -> str:
    canonical = json.dumps(config_document(ec), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def run_experiment(ec: ExperimentConfig) -> RunResult:
    """Train/evaluate per seed plus baselines on the shared eval stream."""
    t0 = time.perf_counter()
    space = build_action_space(ec.system)
    steps = ec.resolved_train_steps(space.cardinality)

    random_mean = evaluate(
        RandomAgent(space, seed=ec.eval_seed),
        ec.system,
        ec.eval_steps,
        np.random.default_rng(ec.eval_seed),
    )
    oracle_mean = None
    if ec.compute_oracle:
        oracle_mean = evaluate(
            OracleAgent(space, ec.system),
            ec.system,
            ec.eval_steps,
            np.random.default_rng(ec.eval_seed),
        )

    train_logs: dict[int, MetricsLog] = {}
    eval_means: dict[int, float] = {}
    normalized: dict[int, float] = {}
    for seed in ec.seeds:
        agent_ss, train_ss = np.random.SeedSequence(seed).spawn(2)
        agent = make_agent(ec, space, agent_ss)
        train_logs[seed] = train(
            agent, ec.system, steps, np.random.default_rng(train_ss)
        )
        eval_means[seed] = evaluate(
            agent, ec.system, ec.eval_steps, np.random.default_rng(ec.eval_seed)
        )
        if oracle_mean is not None:
            normalized[seed] = normalized_rate(eval_means[seed], oracle_mean)

    return RunResult(
        agent_kind=ec.agent_kind,
        seeds=ec.seeds,
        train_steps=steps,
        eval_steps=ec.eval_steps,
        train_logs=train_logs,
        eval_means=eval_means,
        random_mean=random_mean,
        oracle_mean=oracle_mean,
        normalized=normalized,
        fingerprint=config_fingerprint(ec),
        config_doc=config_document(ec),
        wall_clock_s=time.perf_counter() - t0,
    )


def with_power(ec: ExperimentConfig, power_dbm: float) -> ExperimentConfig:
    return replace(ec, system=replace(ec.system, power_dbm=power_dbm))


def with_total_elements(ec: ExperimentConfig, n_tot: int) -> ExperimentConfig:
    """Resize every RIS so that M*N equals n_tot; all else held fixed."""
    geom = ec.system.geometry
    if n_tot % geom.n_ris != 0:
        raise ValueError(f"n_tot={n_tot} not divisible by M={geom.n_ris}")
    rows, cols = ris_panel_shape(n_tot // geom.n_ris)
    new_geom = Geometry(
        bs=geom.bs,
        ris=geom.ris,
        ues=geom.ues,
        bs_antennas=geom.bs_antennas,
        ris_rows=rows,
        ris_cols=cols,
    )
    return replace(ec, system=replace(ec.system, geometry=new_geom))


def sweep(ec: ExperimentConfig, dimension: str, values) -> list[RunResult]:
    """Repeat the experiment along one axis (transmit power or RIS size)."""
    values = list(values)
    if not values:
        raise ValueError("sweep needs at least one value")
    results = []
    for v in values:
        if dimension == "power_dbm":
            point = with_power(ec, float(v))
        elif dimension == "n_tot":
            point = with_total_elements(ec, int(v))
        else:
            raise ValueError(f"unknown sweep dimension {dimension!r}")
        results.append(run_experiment(point))
    return results
