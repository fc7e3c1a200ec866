"""The four policies under test, behind one select/observe contract.

- DRP: a network predicting the expected reward of every action, trained
  online with a masked squared error on the taken action, epsilon-greedy.
- DQN: TD-loss value learner with a replay buffer and a soft-updated
  target network; action selection follows the target network.
- UCB1: context-free mean-plus-confidence bandit.
- Random: uniform action selection.

Every agent owns its random streams, spawned from a single seed, so two
agents built with the same seed consume identical exploration and dropout
randomness. In eval mode selection is greedy/deterministic (the random
baseline, whose policy *is* its rng, excepted) and observe is a no-op.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .environment import Action, ActionSpace, SystemConfig, exhaustive_best, unflatten_state
from .mlp import (
    Gradients,
    LayerSpec,
    NetworkParams,
    OptimizerState,
    accumulate_gradients,
    backward_scalar_target,
    clip_gradients,
    forward,
    init_network,
    optimizer_step,
    params_from_doc,
    params_to_doc,
    scale_gradients,
    zero_gradients,
)

CHECKPOINT_FORMAT = "agent-checkpoint-v1"

@dataclass
class Transition:
    state: np.ndarray
    action_idx: int
    reward: float
    next_state: np.ndarray


class ReplayBuffer:
    """Ring buffer of transitions; oldest evicted first.

    Uniform sampling (with replacement) by default; optionally samples in
    proportion to the magnitude of the TD error seen at each transition's
    last use.
    """

    def __init__(self, capacity: int, prioritized: bool = False):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self.capacity = capacity
        self.prioritized = prioritized
        self._data: list[Transition] = []
        self._priorities: list[float] = []
        self._pos = 0

    def __len__(self) -> int:
        return len(self._data)

    def __getitem__(self, idx: int) -> Transition:
        return self._data[idx]

    def push(self, transition: Transition) -> None:
        priority = max(self._priorities, default=1.0)
        if len(self._data) < self.capacity:
            self._data.append(transition)
            self._priorities.append(priority)
        else:
            self._data[self._pos] = transition
            self._priorities[self._pos] = priority
            self._pos = (self._pos + 1) % self.capacity

    def sample(self, batch_size: int, rng: np.random.Generator) -> np.ndarray:
        if not self._data:
            raise ValueError("cannot sample from an empty replay buffer")
        n = min(batch_size, len(self._data))
        if self.prioritized:
            pri = np.asarray(self._priorities)
            return rng.choice(len(self._data), size=n, p=pri / pri.sum())
        return rng.integers(len(self._data), size=n)

    def set_priority(self, idx: int, value: float) -> None:
        self._priorities[idx] = value + 1e-6  # keep strictly positive


def soft_update(
    target: NetworkParams, online: NetworkParams, tau: float
) -> NetworkParams:
    """Elementwise convex copy: target <- (1-tau)*target + tau*online."""
    if not 0.0 <= tau <= 1.0:
        raise ValueError("tau must be in [0, 1]")
    if target.sizes != online.sizes:
        raise ValueError(f"shape mismatch: {target.sizes} vs {online.sizes}")
    for tw, ow in zip(target.weights, online.weights):
        tw *= 1.0 - tau
        tw += tau * ow
    for tb, ob in zip(target.biases, online.biases):
        tb *= 1.0 - tau
        tb += tau * ob
    return target


def _spawn_rngs(seed) -> tuple[np.random.Generator, ...]:
    """Independent (init, policy, replay) streams from one seed."""
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    return tuple(np.random.default_rng(child) for child in seed.spawn(3))


class Agent:
    """select/observe/set_mode contract shared by all policies."""

    def __init__(self, space: ActionSpace):
        self.space = space
        self.mode = "train"

    def set_mode(self, mode: str) -> None:
        if mode not in ("train", "eval"):
            raise ValueError(f"unknown mode {mode!r}")
        self.mode = mode

    def select(self, state: np.ndarray) -> Action:
        raise NotImplementedError

    def observe(self, state, action: Action, reward: float, next_state) -> None:
        pass


class RandomAgent(Agent):
    """Uniform over the action space; its rng is its whole policy."""

    def __init__(self, space: ActionSpace, seed=0):
        super().__init__(space)
        _, self._rng, _ = _spawn_rngs(seed)

    def select(self, state: np.ndarray) -> Action:
        return self.space.decode(int(self._rng.integers(self.space.cardinality)))


class UCBAgent(Agent):
    """UCB1: warm-up round-robin, then argmax of mean + sqrt(2 ln t / n).

    Ignores the observation vector entirely. In eval mode it plays the
    arm with the best running mean.
    """

    def __init__(self, space: ActionSpace, seed=0):
        super().__init__(space)
        self.counts = np.zeros(space.cardinality, dtype=np.int64)
        self.means = np.zeros(space.cardinality)
        self.total_steps = 0

    def select(self, state: np.ndarray) -> Action:
        if self.mode == "eval":
            return self.space.decode(int(np.argmax(self.means)))
        unpulled = np.flatnonzero(self.counts == 0)
        if unpulled.size:
            return self.space.decode(int(unpulled[0]))
        bounds = self.means + np.sqrt(2.0 * math.log(self.total_steps) / self.counts)
        return self.space.decode(int(np.argmax(bounds)))

    def observe(self, state, action: Action, reward: float, next_state) -> None:
        if self.mode != "train":
            return
        idx = self.space.encode(action)
        self.counts[idx] += 1
        self.means[idx] += (reward - self.means[idx]) / self.counts[idx]
        self.total_steps += 1


class DRPAgent(Agent):
    """Reward-prediction bandit: predict r per action, regress on the
    taken action's prediction, act epsilon-greedily on the predictions."""

    def __init__(
        self,
        space: ActionSpace,
        layer_spec: LayerSpec,
        epsilon: float = 0.3,
        learning_rate: float = 0.001,
        optimizer: str = "adam",
        seed=0,
    ):
        super().__init__(space)
        if not 0.0 <= epsilon <= 1.0:
            raise ValueError("epsilon must be in [0, 1]")
        init_rng, self._policy_rng, _ = _spawn_rngs(seed)
        self.net = init_network(layer_spec, init_rng)
        self.epsilon = epsilon
        self.opt = OptimizerState(mode=optimizer, learning_rate=learning_rate)
        self.train_steps = 0

    def _greedy(self, net: NetworkParams, state: np.ndarray) -> Action:
        outputs, _ = forward(net, state)
        return self.space.decode(int(np.argmax(outputs)))

    def select(self, state: np.ndarray) -> Action:
        if self.mode == "train" and self.epsilon > 0.0:
            if self._policy_rng.random() < self.epsilon:
                return self.space.decode(
                    int(self._policy_rng.integers(self.space.cardinality))
                )
        return self._greedy(self.net, state)

    def observe(self, state, action: Action, reward: float, next_state) -> None:
        if self.mode != "train":
            return
        idx = self.space.encode(action)
        _, trace = forward(self.net, state, train_mode=True, rng=self._policy_rng)
        grads = backward_scalar_target(trace, self.net, idx, reward)
        optimizer_step(self.net, grads, self.opt)
        self.train_steps += 1


class DQNAgent(Agent):
    """Q-learning with experience replay and a lagged target network.

    Selection is greedy on the target network; each update regresses the
    online network toward r + gamma * max_a' target(s')[a'] on a sampled
    batch, with optional elementwise gradient clipping. The target
    network soft-copies the online one every target_update_freq steps.
    """

    def __init__(
        self,
        space: ActionSpace,
        layer_spec: LayerSpec,
        epsilon: float = 0.3,
        learning_rate: float = 0.0002,
        batch_size: int = 128,
        gamma: float = 0.0,
        tau: float = 0.18,
        target_update_freq: int = 100,
        buffer_capacity: int = 100_000,
        clip_delta: float | None = None,
        prioritized_replay: bool = False,
        optimizer: str = "adam",
        seed=0,
    ):
        super().__init__(space)
        if not 0.0 <= epsilon <= 1.0:
            raise ValueError("epsilon must be in [0, 1]")
        if batch_size < 1 or target_update_freq < 1:
            raise ValueError("batch_size and target_update_freq must be >= 1")
        init_rng, self._policy_rng, self._replay_rng = _spawn_rngs(seed)
        self.online = init_network(layer_spec, init_rng)
        self.target = self.online.copy()
        self.buffer = ReplayBuffer(buffer_capacity, prioritized=prioritized_replay)
        self.epsilon = epsilon
        self.batch_size = batch_size
        self.gamma = gamma
        self.tau = tau
        self.target_update_freq = target_update_freq
        self.clip_delta = clip_delta
        self.opt = OptimizerState(mode=optimizer, learning_rate=learning_rate)
        self._env_steps = 0

    def select(self, state: np.ndarray) -> Action:
        if self.mode == "train" and self.epsilon > 0.0:
            if self._policy_rng.random() < self.epsilon:
                return self.space.decode(
                    int(self._policy_rng.integers(self.space.cardinality))
                )
        outputs, _ = forward(self.target, state)
        return self.space.decode(int(np.argmax(outputs)))

    def observe(self, state, action: Action, reward: float, next_state) -> None:
        if self.mode != "train":
            return
        self.buffer.push(
            Transition(state, self.space.encode(action), reward, next_state)
        )
        if len(self.buffer) >= self.batch_size:
            self._update()
        self._env_steps += 1
        if self._env_steps % self.target_update_freq == 0:
            soft_update(self.target, self.online, self.tau)

    def _update(self) -> None:
        indices = self.buffer.sample(self.batch_size, self._replay_rng)
        total: Gradients = zero_gradients(self.online)
        for i in indices:
            tr = self.buffer[int(i)]
            q_next, _ = forward(self.target, tr.next_state)
            target_val = tr.reward + self.gamma * float(np.max(q_next))
            out, trace = forward(
                self.online, tr.state, train_mode=True, rng=self._policy_rng
            )
            accumulate_gradients(
                total,
                backward_scalar_target(trace, self.online, tr.action_idx, target_val),
            )
            if self.buffer.prioritized:
                self.buffer.set_priority(int(i), abs(float(out[tr.action_idx]) - target_val))
        grads = scale_gradients(total, 1.0 / len(indices))
        if self.clip_delta is not None:
            grads = clip_gradients(grads, self.clip_delta)
        optimizer_step(self.online, grads, self.opt)


class OracleAgent(Agent):
    """Exhaustive search per step; the upper bound every rate is
    normalized against. Reconstructs the channel realization from the
    observation (the flattening is lossless) and enumerates all actions."""

    def __init__(self, space: ActionSpace, cfg: SystemConfig):
        super().__init__(space)
        self.cfg = cfg

    def select(self, state: np.ndarray) -> Action:
        ch = unflatten_state(np.asarray(state), self.cfg)
        action, _ = exhaustive_best(ch, self.space, self.cfg)
        return action


def save_agent(agent: Agent, path) -> None:
    """Checkpoint an agent's learned policy: a small header (kind, step
    count) plus network parameters or UCB tables. Optimizer and replay
    state are not persisted; a loaded agent is meant for evaluation."""
    doc: dict = {"format": CHECKPOINT_FORMAT}
    if isinstance(agent, DRPAgent):
        doc.update(
            kind="drp",
            steps=agent.train_steps,
            epsilon=agent.epsilon,
            network=params_to_doc(agent.net),
        )
    elif isinstance(agent, DQNAgent):
        doc.update(
            kind="dqn",
            steps=agent._env_steps,
            epsilon=agent.epsilon,
            online=params_to_doc(agent.online),
            target=params_to_doc(agent.target),
        )
    elif isinstance(agent, UCBAgent):
        doc.update(
            kind="ucb",
            steps=agent.total_steps,
            counts=agent.counts.tolist(),
            means=agent.means.tolist(),
        )
    elif isinstance(agent, RandomAgent):
        doc.update(kind="random", steps=0)
    elif isinstance(agent, OracleAgent):
        doc.update(kind="oracle", steps=0)
    else:
        raise ValueError(f"cannot checkpoint agent type {type(agent).__name__}")
    with open(path, "w") as fh:
        json.dump(doc, fh, sort_keys=True)


def load_agent(
    path, space: ActionSpace, cfg: SystemConfig | None = None, seed=0
) -> Agent:
    """Rebuild an agent from a checkpoint; `cfg` is required for oracle."""
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("format") != CHECKPOINT_FORMAT:
        raise ValueError(f"unsupported checkpoint format {doc.get('format')!r}")
    kind = doc["kind"]
    if kind == "drp":
        net = params_from_doc(doc["network"])
        spec = LayerSpec(sizes=net.sizes, dropout_p=net.dropout_p)
        agent = DRPAgent(space, spec, epsilon=doc["epsilon"], seed=seed)
        agent.net = net
        agent.train_steps = doc["steps"]
        return agent
    if kind == "dqn":
        online = params_from_doc(doc["online"])
        spec = LayerSpec(sizes=online.sizes, dropout_p=online.dropout_p)
        agent = DQNAgent(space, spec, epsilon=doc["epsilon"], seed=seed)
        agent.online = online
        agent.target = params_from_doc(doc["target"])
        agent._env_steps = doc["steps"]
        return agent
    if kind == "ucb":
        agent = UCBAgent(space, seed=seed)
        agent.counts = np.asarray(doc["counts"], dtype=np.int64)
        agent.means = np.asarray(doc["means"], dtype=float)
        agent.total_steps = doc["steps"]
        return agent
    if kind == "random":
        return RandomAgent(space, seed=seed)
    if kind == "oracle":
        if cfg is None:
            raise ValueError("loading an oracle checkpoint requires the system config")
        return OracleAgent(space, cfg)
    raise ValueError(f"unknown agent kind {kind!r} in checkpoint")
