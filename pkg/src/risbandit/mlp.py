"""A small fully connected network with hand-written backprop.

ReLU hidden layers, identity output, inverted dropout on hidden
activations, elementwise gradient clipping, and SGD/Adam updates. The
loss this network is trained under is always a squared error on a single
output component (the prediction for the action actually taken); the
gradient of that masked loss is what backward_scalar_target computes.

Forward and backward operate on single samples; callers loop for
mini-batches. Correctness is favored over throughput throughout.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

PARAMS_FORMAT = "mlp-params-v1"


@dataclass(frozen=True)
class LayerSpec:
    """Layer widths (input, hidden..., output) and hidden dropout rate."""

    sizes: tuple[int, ...]
    dropout_p: float = 0.0

    def __post_init__(self):
        if len(self.sizes) < 2:
            raise ValueError("need at least input and output sizes")
        if any(s < 1 for s in self.sizes):
            raise ValueError("layer sizes must be >= 1")
        if not 0.0 <= self.dropout_p < 1.0:
            raise ValueError("dropout_p must be in [0, 1)")


@dataclass
class NetworkParams:
    """Weights and biases; weights[l] has shape (out_l, in_l)."""

    weights: list[np.ndarray]
    biases: list[np.ndarray]
    dropout_p: float = 0.0

    @property
    def sizes(self) -> tuple[int, ...]:
        return (self.weights[0].shape[1],) + tuple(w.shape[0] for w in self.weights)

    def copy(self) -> "NetworkParams":
        return NetworkParams(
            weights=[w.copy() for w in self.weights],
            biases=[b.copy() for b in self.biases],
            dropout_p=self.dropout_p,
        )


@dataclass
class ForwardTrace:
    """Everything backprop needs from one training-mode forward pass."""

    input: np.ndarray
    pre_activations: list[np.ndarray]
    activations: list[np.ndarray]
    dropout_masks: list[np.ndarray | None]


@dataclass
class Gradients:
    """Same shapes as NetworkParams."""

    weights: list[np.ndarray]
    biases: list[np.ndarray]


@dataclass
class OptimizerState:
    """SGD or Adam state; Adam keeps bias-corrected first/second moments."""

    mode: str
    learning_rate: float
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step: int = 0
    m: Gradients | None = field(default=None, repr=False)
    v: Gradients | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.mode not in ("sgd", "adam"):
            raise ValueError(f"unknown optimizer mode {self.mode!r}")
        if not self.learning_rate > 0:
            raise ValueError("learning rate must be positive")


def init_network(spec: LayerSpec, rng: np.random.Generator) -> NetworkParams:
    """Zero-mean weights scaled by sqrt(2/fan_in); zero biases."""
    weights, biases = [], []
    for fan_in, fan_out in zip(spec.sizes[:-1], spec.sizes[1:]):
        scale = math.sqrt(2.0 / fan_in)
        weights.append(scale * rng.standard_normal((fan_out, fan_in)))
        biases.append(np.zeros(fan_out))
    return NetworkParams(weights=weights, biases=biases, dropout_p=spec.dropout_p)


def forward(
    params: NetworkParams,
    x: np.ndarray,
    train_mode: bool = False,
    rng: np.random.Generator | None = None,
) -> tuple[np.ndarray, ForwardTrace | None]:
    """Run the network; the trace is recorded only in training mode.

    Hidden layers apply ReLU then (in training mode) inverted dropout,
    scaling kept units by 1/(1-p) so eval needs no rescaling. Eval mode is
    deterministic and returns trace=None.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (params.weights[0].shape[1],):
        raise ValueError(
            f"input shape {x.shape} != ({params.weights[0].shape[1]},)"
        )
    p = params.dropout_p
    if train_mode and p > 0.0 and rng is None:
        raise ValueError("training-mode forward with dropout needs an rng")
    n_layers = len(params.weights)
    pre, act, masks = [], [], []
    a = x
    for l in range(n_layers):
        z = params.weights[l] @ a + params.biases[l]
        if l == n_layers - 1:
            a = z  # identity output
            mask = None
        else:
            a = np.maximum(z, 0.0)
            mask = None
            if train_mode and p > 0.0:
                mask = (rng.random(a.shape) >= p) / (1.0 - p)
                a = a * mask
        if train_mode:
            pre.append(z)
            act.append(a)
            masks.append(mask)
    if not train_mode:
        return a, None
    return a, ForwardTrace(
        input=x, pre_activations=pre, activations=act, dropout_masks=masks
    )


def backward_scalar_target(
    trace: ForwardTrace, params: NetworkParams, action_idx: int, target: float
) -> Gradients:
    """Gradients of (target - output[action_idx])^2 w.r.t. all parameters.

    The loss touches a single output component, so the output-layer error
    is zero everywhere except action_idx, where it is 2*(out - target).
    """
    output = trace.activations[-1]
    if not 0 <= action_idx < output.shape[0]:
        raise IndexError(f"action index {action_idx} out of range")
    n_layers = len(params.weights)
    d_out = np.zeros_like(output)
    d_out[action_idx] = 2.0 * (output[action_idx] - target)

    g_w = [np.empty(0)] * n_layers
    g_b = [np.empty(0)] * n_layers
    dz = d_out
    for l in range(n_layers - 1, -1, -1):
        a_prev = trace.input if l == 0 else trace.activations[l - 1]
        g_w[l] = np.outer(dz, a_prev)
        g_b[l] = dz.copy()
        if l > 0:
            da = params.weights[l].T @ dz
            mask = trace.dropout_masks[l - 1]
            if mask is not None:
                da = da * mask
            dz = da * (trace.pre_activations[l - 1] > 0)
    return Gradients(weights=g_w, biases=g_b)


def zero_gradients(params: NetworkParams) -> Gradients:
    return Gradients(
        weights=[np.zeros_like(w) for w in params.weights],
        biases=[np.zeros_like(b) for b in params.biases],
    )


def accumulate_gradients(total: Gradients, delta: Gradients) -> None:
    for t, d in zip(total.weights, delta.weights):
        t += d
    for t, d in zip(total.biases, delta.biases):
        t += d


def scale_gradients(grads: Gradients, factor: float) -> Gradients:
    return Gradients(
        weights=[w * factor for w in grads.weights],
        biases=[b * factor for b in grads.biases],
    )


def clip_gradients(grads: Gradients, delta: float) -> Gradients:
    """Elementwise clamp of every component to [-delta, delta]."""
    if not delta > 0:
        raise ValueError("delta must be positive")
    return Gradients(
        weights=[np.clip(w, -delta, delta) for w in grads.weights],
        biases=[np.clip(b, -delta, delta) for b in grads.biases],
    )


def optimizer_step(
    params: NetworkParams, grads: Gradients, state: OptimizerState
) -> NetworkParams:
    """One in-place descent update; returns params for convenience."""
    if state.mode == "sgd":
        eta = state.learning_rate
        for w, gw in zip(params.weights, grads.weights):
            w -= eta * gw
        for b, gb in zip(params.biases, grads.biases):
            b -= eta * gb
        return params

    if state.m is None:
        state.m = zero_gradients(params)
        state.v = zero_gradients(params)
    state.step += 1
    t = state.step
    b1, b2 = state.beta1, state.beta2
    corr1 = 1.0 - b1**t
    corr2 = 1.0 - b2**t

    def _adam(p_arr, g_arr, m_arr, v_arr):
        m_arr *= b1
        m_arr += (1.0 - b1) * g_arr
        v_arr *= b2
        v_arr += (1.0 - b2) * g_arr * g_arr
        m_hat = m_arr / corr1
        v_hat = v_arr / corr2
        p_arr -= state.learning_rate * m_hat / (np.sqrt(v_hat) + state.eps)

    for w, gw, mw, vw in zip(
        params.weights, grads.weights, state.m.weights, state.v.weights
    ):
        _adam(w, gw, mw, vw)
    for b, gb, mb, vb in zip(
        params.biases, grads.biases, state.m.biases, state.v.biases
    ):
        _adam(b, gb, mb, vb)
    return params


def params_to_doc(params: NetworkParams) -> dict:
    """JSON-able dump: format tag, shapes, and row-major values."""
    return {
        "format": PARAMS_FORMAT,
        "sizes": list(params.sizes),
        "dropout_p": params.dropout_p,
        "weights": [w.ravel().tolist() for w in params.weights],
        "biases": [b.tolist() for b in params.biases],
    }


def params_from_doc(doc: dict) -> NetworkParams:
    if doc.get("format") != PARAMS_FORMAT:
        raise ValueError(f"unsupported parameter file format {doc.get('format')!r}")
    sizes = doc["sizes"]
    weights, biases = [], []
    for fan_in, fan_out, w_flat, b in zip(
        sizes[:-1], sizes[1:], doc["weights"], doc["biases"]
    ):
        weights.append(np.asarray(w_flat).reshape(fan_out, fan_in))
        biases.append(np.asarray(b, dtype=float))
    return NetworkParams(weights=weights, biases=biases, dropout_p=doc["dropout_p"])


def save_params(params: NetworkParams, path) -> None:
    """Versioned JSON checkpoint, byte-stable across identical runs."""
    with open(path, "w") as fh:
        json.dump(params_to_doc(params), fh, sort_keys=True)


def load_params(path) -> NetworkParams:
    with open(path) as fh:
        return params_from_doc(json.load(fh))
