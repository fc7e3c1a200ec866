"""The decision problem: actions, states, and the sum-rate reward.

An action is one precoding matrix from a DFT-derived codebook plus one
bit per RIS element group (1-bit phases, elements controlled in groups).
A step draws a fresh channel realization (IID across steps, so actions
never influence future states), exposes it as a flat real observation,
and scores any action by the downlink sum rate it would achieve on that
realization. An exhaustive-search oracle provides the per-step optimum.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .channels import (
    ChannelSet,
    Geometry,
    RiceanParams,
    amplitude_attenuation,
    angles_between,
    sample_channel_set,
)

# Enumeration guard for exhaustive search.
MAX_ENUMERABLE_ACTIONS = 2**20
# Index guard: keep action indices comfortably inside int64 artifacts.
MAX_GROUP_BITS = 60


@dataclass(frozen=True, eq=False)
class PrecoderCodebook:
    """All precoding matrices plus the per-UE DFT column choices behind them.

    matrices: (card, N_T, K) complex, every column unit norm.
    column_choices[i]: the DFT column index used for each UE in matrix i.
    """

    matrices: np.ndarray
    column_choices: tuple[tuple[int, ...], ...]

    @property
    def cardinality(self) -> int:
        return self.matrices.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PrecoderCodebook):
            return NotImplemented
        return self.column_choices == other.column_choices and np.array_equal(
            self.matrices, other.matrices
        )


def build_codebook(n_t: int, k_ues: int) -> PrecoderCodebook:
    """Codebook from the n_t x n_t DFT matrix, columns split evenly per UE.

    UE k draws its unit-norm column from block k of the DFT columns; the
    codebook is the Cartesian product of the per-UE choices, ordered with
    UE 0 as the most significant digit.
    """
    if n_t < k_ues:
        raise ValueError(f"n_t={n_t} must be >= number of UEs {k_ues}")
    if n_t % k_ues != 0:
        raise ValueError(f"n_t={n_t} not divisible by number of UEs {k_ues}")
    idx = np.arange(n_t)
    dft = np.exp(-2j * np.pi * np.outer(idx, idx) / n_t) / math.sqrt(n_t)
    per_ue = n_t // k_ues
    choices = list(itertools.product(range(per_ue), repeat=k_ues))
    matrices = np.empty((len(choices), n_t, k_ues), dtype=complex)
    columns = []
    for i, choice in enumerate(choices):
        cols = tuple(k * per_ue + c for k, c in enumerate(choice))
        matrices[i] = dft[:, list(cols)]
        columns.append(cols)
    return PrecoderCodebook(matrices=matrices, column_choices=tuple(columns))


@dataclass(frozen=True)
class SystemConfig:
    """Static description of one simulated system.

    power_dbm is the total transmit budget P, noise_dbm the per-UE noise
    power; both enter the SINR only through the ratio K*sigma^2/P.
    """

    geometry: Geometry
    ricean: RiceanParams
    n_group: int
    power_dbm: float
    noise_dbm: float
    codebook: PrecoderCodebook

    def __post_init__(self):
        if self.n_group < 1:
            raise ValueError("n_group must be >= 1")
        if self.n_tot % self.n_group != 0:
            raise ValueError(
                f"n_group={self.n_group} does not divide N_tot={self.n_tot}"
            )

    @property
    def n_tot(self) -> int:
        return self.geometry.n_ris * self.geometry.elements_per_ris

    @property
    def n_hat(self) -> int:
        return self.n_tot // self.n_group

    @property
    def power_mw(self) -> float:
        return 10.0 ** (self.power_dbm / 10.0)

    @property
    def noise_mw(self) -> float:
        return 10.0 ** (self.noise_dbm / 10.0)

    @property
    def state_dim(self) -> int:
        g = self.geometry
        return 2 * g.n_ris * g.elements_per_ris * (g.bs_antennas + g.n_ues)


@dataclass(frozen=True)
class Action:
    """A codebook index plus one phase bit per RIS element group."""

    precoder_idx: int
    theta_groups: tuple[int, ...]


class ActionSpace:
    """Bijective index over (precoder, group bits) pairs.

    I(a) = precoder_idx * 2^n_hat + big-endian integer of theta_groups.
    """

    def __init__(self, codebook_size: int, n_hat: int):
        if n_hat > MAX_GROUP_BITS:
            raise ValueError(
                f"n_hat={n_hat} exceeds the supported index width ({MAX_GROUP_BITS} bits)"
            )
        self.codebook_size = codebook_size
        self.n_hat = n_hat
        self.cardinality = codebook_size * 2**n_hat

    def encode(self, action: Action) -> int:
        if not 0 <= action.precoder_idx < self.codebook_size:
            raise ValueError(f"precoder index {action.precoder_idx} out of range")
        if len(action.theta_groups) != self.n_hat:
            raise ValueError(
                f"expected {self.n_hat} group bits, got {len(action.theta_groups)}"
            )
        bits = 0
        for b in action.theta_groups:
            if b not in (0, 1):
                raise ValueError(f"group bits must be 0/1, got {b}")
            bits = (bits << 1) | b
        return action.precoder_idx * 2**self.n_hat + bits

    def decode(self, index: int) -> Action:
        if not 0 <= index < self.cardinality:
            raise ValueError(f"action index {index} out of range")
        precoder_idx, bits = divmod(index, 2**self.n_hat)
        theta = tuple((bits >> (self.n_hat - 1 - i)) & 1 for i in range(self.n_hat))
        return Action(precoder_idx=precoder_idx, theta_groups=theta)

    def __len__(self) -> int:
        return self.cardinality


def build_action_space(cfg: SystemConfig) -> ActionSpace:
    return ActionSpace(cfg.codebook.cardinality, cfg.n_hat)


def expand_groups(theta_groups: tuple[int, ...], cfg: SystemConfig) -> np.ndarray:
    """Per-RIS reflection vectors (M, N) from the grouped bit vector.

    Groups are contiguous in the global element ordering (RIS 0 first);
    bit 0 reflects with +1, bit 1 with -1.
    """
    if len(theta_groups) != cfg.n_hat:
        raise ValueError(f"expected {cfg.n_hat} group bits, got {len(theta_groups)}")
    bits = np.asarray(theta_groups)
    n = cfg.geometry.elements_per_ris
    global_idx = np.arange(cfg.n_tot)
    per_element = bits[global_idx // cfg.n_group]
    phi = np.where(per_element == 0, 1.0 + 0.0j, -1.0 + 0.0j)
    return phi.reshape(cfg.geometry.n_ris, n)


def end_to_end_channel(
    ch: ChannelSet, action: Action, cfg: SystemConfig
) -> np.ndarray:
    """Effective BS->UE rows b_k, shape (K, N_T).

    b_k = sum_m att(d_m) * att(d_mk) * g_mk * diag(phi_m) * H_m, with the
    per-hop amplitude attenuation applied here rather than inside the raw
    channel draws.
    """
    geom = cfg.geometry
    lam = cfg.ricean.wavelength_m
    phi = expand_groups(action.theta_groups, cfg)
    b = np.zeros((geom.n_ues, geom.bs_antennas), dtype=complex)
    for m in range(geom.n_ris):
        att_m = amplitude_attenuation(float(ch.d_bs_ris[m]), lam)
        reflected = (phi[m][:, None] * ch.h[m])  # diag(phi_m) @ H_m
        for k in range(geom.n_ues):
            att_mk = amplitude_attenuation(float(ch.d_ris_ue[m, k]), lam)
            b[k] += att_m * att_mk * (ch.g[m, k] @ reflected)
    return b


def sinr(b: np.ndarray, precoder: np.ndarray, k: int, cfg: SystemConfig) -> float:
    """SINR of UE k: |b_k v_k|^2 / (sum_{i!=k} |b_k v_i|^2 + K*sigma^2/P)."""
    k_ues = b.shape[0]
    if not 0 <= k < k_ues:
        raise IndexError(f"UE index {k} out of range")
    powers = np.abs(b[k] @ precoder) ** 2
    signal = powers[k]
    interference = float(np.sum(powers)) - float(signal)
    noise = k_ues * cfg.noise_mw / cfg.power_mw
    return float(signal) / (interference + noise)


def sum_rate(ch: ChannelSet, action: Action, cfg: SystemConfig) -> float:
    """Reward: sum over UEs of log2(1 + SINR_k), in bits/s/Hz."""
    b = end_to_end_channel(ch, action, cfg)
    precoder = cfg.codebook.matrices[action.precoder_idx]
    return float(
        sum(math.log2(1.0 + sinr(b, precoder, k, cfg)) for k in range(b.shape[0]))
    )


def flatten_state(ch: ChannelSet) -> np.ndarray:
    """Real observation vector: row-major H_1..H_M then g_11..g_MK,
    each complex entry split into adjacent (re, im)."""
    z = np.concatenate([ch.h.ravel(), ch.g.ravel()])
    out = np.empty(2 * z.size)
    out[0::2] = z.real
    out[1::2] = z.imag
    return out


def unflatten_state(values: np.ndarray, cfg: SystemConfig) -> ChannelSet:
    """Exact inverse of flatten_state; distances come from the geometry."""
    geom = cfg.geometry
    m, k, n, nt = geom.n_ris, geom.n_ues, geom.elements_per_ris, geom.bs_antennas
    expected = 2 * m * n * (nt + k)
    if values.size != expected:
        raise ValueError(f"state length {values.size} != {expected}")
    z = values[0::2] + 1j * values[1::2]
    h = z[: m * n * nt].reshape(m, n, nt)
    g = z[m * n * nt :].reshape(m, k, n)
    d_bs_ris = np.empty(m)
    d_ris_ue = np.empty((m, k))
    for i in range(m):
        _, _, d_bs_ris[i] = angles_between(geom.bs, geom.ris[i])
        for j in range(k):
            _, _, d_ris_ue[i, j] = angles_between(geom.ris[i], geom.ues[j])
    return ChannelSet(h=h, g=g, d_bs_ris=d_bs_ris, d_ris_ue=d_ris_ue)


@dataclass
class EnvStep:
    """One coherence block: its observation and a pure reward oracle."""

    state: np.ndarray
    reward: Callable[[Action], float]
    channels: ChannelSet


def env_step(cfg: SystemConfig, rng: np.random.Generator) -> EnvStep:
    """Draw a fresh coherence block; steps are IID on one rng stream."""
    ch = sample_channel_set(cfg.geometry, cfg.ricean, rng)
    return EnvStep(
        state=flatten_state(ch),
        reward=lambda action: sum_rate(ch, action, cfg),
        channels=ch,
    )


def exhaustive_best(
    ch: ChannelSet, space: ActionSpace, cfg: SystemConfig
) -> tuple[Action, float]:
    """Enumerate every action; return the sum-rate maximizer.

    Ties break toward the lowest action index. Guarded against spaces too
    large to enumerate.
    """
    if space.cardinality > MAX_ENUMERABLE_ACTIONS:
        raise ValueError(
            f"action space of {space.cardinality} too large to enumerate "
            f"(limit {MAX_ENUMERABLE_ACTIONS})"
        )
    best_action = space.decode(0)
    best_value = sum_rate(ch, best_action, cfg)
    for idx in range(1, space.cardinality):
        action = space.decode(idx)
        value = sum_rate(ch, action, cfg)
        if value > best_value:
            best_action, best_value = action, value
    return best_action, best_value
