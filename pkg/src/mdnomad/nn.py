"""Small dense-network stack: parameters, exact reverse-mode gradients, Adam.

Everything is 64-bit and deterministic from a seed. Networks are kept as
plain per-layer weight/bias arrays so the training loop can stay a single
NumPy matmul chain; there is no general autodiff tape here.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, ShapeError, TrainingDivergenceError

HIDDEN_ACTIVATIONS = ("tanh", "relu")


@dataclass
class NetworkParams:
    """Weights and biases of a feed-forward network.

    Weight matrix of layer k has shape (layer_sizes[k+1], layer_sizes[k]);
    the hidden activation is applied after every layer except the last,
    which stays affine so heads can apply their own transforms.
    """

    layer_sizes: list[int]
    weights: list[np.ndarray]
    biases: list[np.ndarray]
    hidden_activation: str = "tanh"

    @property
    def n_layers(self) -> int:
        return len(self.weights)

    @property
    def input_dim(self) -> int:
        return self.layer_sizes[0]

    @property
    def output_dim(self) -> int:
        return self.layer_sizes[-1]

    def validate(self) -> None:
        if len(self.layer_sizes) < 2:
            raise ConfigurationError("need at least an input and an output layer")
        if self.hidden_activation not in HIDDEN_ACTIVATIONS:
            raise ConfigurationError(
                f"unknown hidden activation {self.hidden_activation!r}"
            )
        for k, (w, b) in enumerate(zip(self.weights, self.biases)):
            expect = (self.layer_sizes[k + 1], self.layer_sizes[k])
            if w.shape != expect:
                raise ShapeError(f"layer {k}: weight shape {w.shape} != {expect}")
            if b.shape != (self.layer_sizes[k + 1],):
                raise ShapeError(f"layer {k}: bias length {b.shape} mismatch")
            if not (np.isfinite(w).all() and np.isfinite(b).all()):
                raise ShapeError(f"layer {k}: non-finite parameters")

    def copy(self) -> "NetworkParams":
        return NetworkParams(
            list(self.layer_sizes),
            [w.copy() for w in self.weights],
            [b.copy() for b in self.biases],
            self.hidden_activation,
        )


@dataclass
class NetworkGrads:
    """Per-layer gradients mirroring a NetworkParams instance."""

    weights: list[np.ndarray]
    biases: list[np.ndarray]


def network_init(layer_sizes, hidden_activation: str = "tanh", seed: int = 0) -> NetworkParams:
    """Glorot-uniform weights, zero biases, reproducible from the seed."""
    sizes = [int(s) for s in layer_sizes]
    if len(sizes) < 2:
        raise ConfigurationError("layer_sizes must list input and output widths")
    if any(s <= 0 for s in sizes):
        raise ConfigurationError(f"layer sizes must be positive, got {sizes}")
    if hidden_activation not in HIDDEN_ACTIVATIONS:
        raise ConfigurationError(f"unknown hidden activation {hidden_activation!r}")
    rng = np.random.default_rng(seed)
    weights, biases = [], []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-limit, limit, size=(fan_out, fan_in)))
        biases.append(np.zeros(fan_out))
    return NetworkParams(sizes, weights, biases, hidden_activation)


def _activate(z: np.ndarray, kind: str) -> np.ndarray:
    if kind == "tanh":
        return np.tanh(z)
    return np.maximum(z, 0.0)


def _activation_grad(a: np.ndarray, kind: str) -> np.ndarray:
    # expressed through the activation output so the forward cache suffices
    if kind == "tanh":
        return 1.0 - a * a
    return (a > 0.0).astype(np.float64)


def forward_batch(params: NetworkParams, x: np.ndarray) -> np.ndarray:
    """Forward pass on a (batch, input_dim) matrix."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != params.input_dim:
        raise ShapeError(
            f"input shape {x.shape} incompatible with input width {params.input_dim}"
        )
    a = x
    last = params.n_layers - 1
    for k, (w, b) in enumerate(zip(params.weights, params.biases)):
        a = a @ w.T + b
        if k != last:
            a = _activate(a, params.hidden_activation)
    return a


def forward_batch_cached(params: NetworkParams, x: np.ndarray):
    """Forward pass that also returns the per-layer inputs needed by backward."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != params.input_dim:
        raise ShapeError(
            f"input shape {x.shape} incompatible with input width {params.input_dim}"
        )
    acts = [x]
    a = x
    last = params.n_layers - 1
    for k, (w, b) in enumerate(zip(params.weights, params.biases)):
        a = a @ w.T + b
        if k != last:
            a = _activate(a, params.hidden_activation)
        acts.append(a)
    return a, acts


def backward_batch(params: NetworkParams, acts: list[np.ndarray], out_grad: np.ndarray):
    """Reverse-mode gradients for a cached batched forward pass.

    Parameter gradients are summed over the batch; the returned input
    gradient keeps the batch axis so an upstream network can continue the
    chain.
    """
    out_grad = np.asarray(out_grad, dtype=np.float64)
    if out_grad.shape != acts[-1].shape:
        raise ShapeError(
            f"output gradient shape {out_grad.shape} != {acts[-1].shape}"
        )
    w_grads = [None] * params.n_layers
    b_grads = [None] * params.n_layers
    delta = out_grad
    for k in range(params.n_layers - 1, -1, -1):
        if k != params.n_layers - 1:
            delta = delta * _activation_grad(acts[k + 1], params.hidden_activation)
        w_grads[k] = delta.T @ acts[k]
        b_grads[k] = delta.sum(axis=0)
        delta = delta @ params.weights[k]
    return NetworkGrads(w_grads, b_grads), delta


def network_forward(params: NetworkParams, x) -> np.ndarray:
    """Forward map for a single input vector."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise ShapeError(f"expected a vector, got shape {x.shape}")
    return forward_batch(params, x[None, :])[0]


def network_backward(params: NetworkParams, x, output_gradient):
    """Exact gradients of the forward map for one input vector.

    Returns (parameter_gradients, input_gradient); the input gradient lets
    a decoder backpropagate into the branch output.
    """
    x = np.asarray(x, dtype=np.float64)
    g = np.asarray(output_gradient, dtype=np.float64)
    if g.shape != (params.output_dim,):
        raise ShapeError(f"output gradient length {g.shape} != {params.output_dim}")
    _, acts = forward_batch_cached(params, x[None, :])
    grads, x_grad = backward_batch(params, acts, g[None, :])
    return grads, x_grad[0]


@dataclass
class AdamState:
    """First/second moment mirrors plus hyperparameters for Adam."""

    m_weights: list[np.ndarray]
    m_biases: list[np.ndarray]
    v_weights: list[np.ndarray]
    v_biases: list[np.ndarray]
    step_count: int = 0
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8


def adam_init(params: NetworkParams, learning_rate: float = 1e-3,
              beta1: float = 0.9, beta2: float = 0.999,
              epsilon: float = 1e-8) -> AdamState:
    if learning_rate <= 0 or epsilon <= 0:
        raise ConfigurationError("learning_rate and epsilon must be positive")
    if not (0.0 < beta1 < 1.0 and 0.0 < beta2 < 1.0):
        raise ConfigurationError("beta1 and beta2 must lie in (0, 1)")
    zeros_w = [np.zeros_like(w) for w in params.weights]
    zeros_b = [np.zeros_like(b) for b in params.biases]
    return AdamState(
        zeros_w, zeros_b,
        [np.zeros_like(w) for w in params.weights],
        [np.zeros_like(b) for b in params.biases],
        0, learning_rate, beta1, beta2, epsilon,
    )


def adam_update(params: NetworkParams, grads: NetworkGrads, state: AdamState):
    """One bias-corrected Adam step; returns fresh (params, state)."""
    for k, (gw, gb) in enumerate(zip(grads.weights, grads.biases)):
        if not (np.isfinite(gw).all() and np.isfinite(gb).all()):
            raise TrainingDivergenceError(
                f"non-finite gradient in layer {k}", layer=k
            )
    t = state.step_count + 1
    b1, b2 = state.beta1, state.beta2
    lr, eps = state.learning_rate, state.epsilon
    c1 = 1.0 - b1 ** t
    c2 = 1.0 - b2 ** t
    new_w, new_b = [], []
    mw, mb, vw, vb = [], [], [], []
    for w, b, gw, gb, m_w, m_b, v_w, v_b in zip(
        params.weights, params.biases, grads.weights, grads.biases,
        state.m_weights, state.m_biases, state.v_weights, state.v_biases,
    ):
        m_w = b1 * m_w + (1.0 - b1) * gw
        m_b = b1 * m_b + (1.0 - b1) * gb
        v_w = b2 * v_w + (1.0 - b2) * gw * gw
        v_b = b2 * v_b + (1.0 - b2) * gb * gb
        new_w.append(w - lr * (m_w / c1) / (np.sqrt(v_w / c2) + eps))
        new_b.append(b - lr * (m_b / c1) / (np.sqrt(v_b / c2) + eps))
        mw.append(m_w)
        mb.append(m_b)
        vw.append(v_w)
        vb.append(v_b)
    out_params = NetworkParams(
        list(params.layer_sizes), new_w, new_b, params.hidden_activation
    )
    out_state = AdamState(mw, mb, vw, vb, t, lr, b1, b2, eps)
    return out_params, out_state


def softplus(x):
    """log(1 + exp(x)), overflow-safe for any finite input."""
    return np.logaddexp(0.0, x)


def softmax(v):
    """Numerically stable softmax; output sums to 1."""
    v = np.asarray(v, dtype=np.float64)
    shifted = v - v.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)
