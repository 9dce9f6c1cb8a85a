"""
Many-to-one GRU/LSTM estimator in numpy: initialisation, batched forward pass, the MSE objective
and exact gradients by backpropagation through time.

Inputs are (batch, steps, input_dim) arrays; the hidden state starts at zero, only the top
layer's last hidden state reaches the dense head
    z = ReLU(W_zh h_N + b_z),   θ̂ = W_tz z + b_t.
"""

from typing import Dict, List, Tuple

import numpy as np
from scipy.special import expit

from config.defaults import LSTM_FORGET_BIAS
from enums.network import CellType
from exceptions.deepbayes_exceptions.exceptions import InvalidSpecError, NonFiniteGradientError
from helpers.common_helper.logger_helper import LoggerHelper
from helpers.common_helper.rng_helper import STREAM_INIT, make_rng
from models.rnn_config import RnnConfig
from models.rnn_weights import RnnWeights, expected_shapes, layer_key

logger = LoggerHelper(__name__).get_logger()

Gradients = Dict[str, np.ndarray]


def init_weights(config: RnnConfig, seed: int) -> RnnWeights:
    """Matrices uniform in ±√(6/(fan_in + fan_out)); biases zero except the LSTM forget gate at 1."""
    rng = make_rng(seed, STREAM_INIT)
    params = {}
    for key, shape in expected_shapes(config).items():
        if len(shape) == 2:
            fan_out, fan_in = shape
            limit = np.sqrt(6.0 / (fan_in + fan_out))
            params[key] = rng.uniform(-limit, limit, size=shape)
        else:
            params[key] = np.zeros(shape)
    if config.cell == CellType.LSTM.value:
        n_h = config.n_H
        for layer in range(config.n_l):
            params[layer_key(layer, "b")][n_h:2 * n_h] = LSTM_FORGET_BIAS
    return RnnWeights(config, params)


def as_batch(sequences, input_dim: int = 1) -> np.ndarray:
    """Accepts (N,), (N, in), (B, N) for scalar inputs or (B, N, in)."""
    x = np.asarray(sequences, dtype=np.float64)
    if x.ndim == 1:
        x = x.reshape(1, -1, 1)
    elif x.ndim == 2:
        x = x.reshape(1, x.shape[0], input_dim) if input_dim > 1 else x[:, :, None]
    if x.ndim != 3 or x.shape[2] != input_dim:
        raise InvalidSpecError(f"expected sequences with input width {input_dim}, got shape {np.shape(sequences)}")
    if x.shape[0] == 0 or x.shape[1] == 0:
        raise InvalidSpecError("sequence batch must be non-empty")
    return x


def _gru_layer(x: np.ndarray, W: np.ndarray, U: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, List]:
    batch, steps, _ = x.shape
    n_h = U.shape[1]
    h = np.zeros((batch, n_h))
    outputs = np.empty((batch, steps, n_h))
    cache = []
    projected = x @ W.T + b
    for k in range(steps):
        a = projected[:, k]
        hu = h @ U.T
        z = expit(a[:, :n_h] + hu[:, :n_h])
        r = expit(a[:, n_h:2 * n_h] + hu[:, n_h:2 * n_h])
        n = np.tanh(a[:, 2 * n_h:] + r * hu[:, 2 * n_h:])
        h_next = (1.0 - z) * n + z * h
        cache.append((h, z, r, n, hu[:, 2 * n_h:]))
        outputs[:, k] = h_next
        h = h_next
    return outputs, cache


def _gru_layer_backward(x, W, U, cache, d_outputs) -> Tuple[Gradients, np.ndarray]:
    batch, steps, _ = x.shape
    n_h = U.shape[1]
    dW, dU, db = np.zeros_like(W), np.zeros_like(U), np.zeros(W.shape[0])
    dx = np.zeros_like(x)
    dh_next = np.zeros((batch, n_h))
    for k in reversed(range(steps)):
        h_prev, z, r, n, hu_n = cache[k]
        dh = dh_next + d_outputs[:, k]
        dz = dh * (h_prev - n)
        dn_pre = dh * (1.0 - z) * (1.0 - n * n)
        dr_pre = dn_pre * hu_n * r * (1.0 - r)
        dz_pre = dz * z * (1.0 - z)

        d_a = np.concatenate([dz_pre, dr_pre, dn_pre], axis=1)
        d_hu = np.concatenate([dz_pre, dr_pre, dn_pre * r], axis=1)
        dW += d_a.T @ x[:, k]
        db += d_a.sum(axis=0)
        dU += d_hu.T @ h_prev
        dx[:, k] = d_a @ W
        dh_next = dh * z + d_hu @ U
    return {"W": dW, "U": dU, "b": db}, dx


def _lstm_layer(x: np.ndarray, W: np.ndarray, U: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, List]:
    batch, steps, _ = x.shape
    n_h = U.shape[1]
    h = np.zeros((batch, n_h))
    c = np.zeros((batch, n_h))
    outputs = np.empty((batch, steps, n_h))
    cache = []
    projected = x @ W.T + b
    for k in range(steps):
        pre = projected[:, k] + h @ U.T
        i = expit(pre[:, :n_h])
        f = expit(pre[:, n_h:2 * n_h])
        o = expit(pre[:, 2 * n_h:3 * n_h])
        g = np.tanh(pre[:, 3 * n_h:])
        c_next = f * c + i * g
        tanh_c = np.tanh(c_next)
        h_next = o * tanh_c
        cache.append((h, c, i, f, o, g, tanh_c))
        outputs[:, k] = h_next
        h, c = h_next, c_next
    return outputs, cache


def _lstm_layer_backward(x, W, U, cache, d_outputs) -> Tuple[Gradients, np.ndarray]:
    batch, steps, _ = x.shape
    n_h = U.shape[1]
    dW, dU, db = np.zeros_like(W), np.zeros_like(U), np.zeros(W.shape[0])
    dx = np.zeros_like(x)
    dh_next = np.zeros((batch, n_h))
    dc_next = np.zeros((batch, n_h))
    for k in reversed(range(steps)):
        h_prev, c_prev, i, f, o, g, tanh_c = cache[k]
        dh = dh_next + d_outputs[:, k]
        do = dh * tanh_c
        dc = dc_next + dh * o * (1.0 - tanh_c * tanh_c)
        d_pre = np.concatenate([
            dc * g * i * (1.0 - i),
            dc * c_prev * f * (1.0 - f),
            do * o * (1.0 - o),
            dc * i * (1.0 - g * g),
        ], axis=1)
        dW += d_pre.T @ x[:, k]
        db += d_pre.sum(axis=0)
        dU += d_pre.T @ h_prev
        dx[:, k] = d_pre @ W
        dh_next = d_pre @ U
        dc_next = dc * f
    return {"W": dW, "U": dU, "b": db}, dx


_LAYERS = {
    CellType.GRU.value: (_gru_layer, _gru_layer_backward),
    CellType.LSTM.value: (_lstm_layer, _lstm_layer_backward),
}


class ForwardCache:
    """Activations kept by forward_batch for the backward pass."""

    def __init__(self, inputs: List[np.ndarray], layer_caches: List, h_last: np.ndarray,
                 z_pre: np.ndarray, z: np.ndarray):
        self.inputs = inputs
        self.layer_caches = layer_caches
        self.h_last = h_last
        self.z_pre = z_pre
        self.z = z


def forward_batch(weights: RnnWeights, x: np.ndarray) -> Tuple[np.ndarray, ForwardCache]:
    config = weights.config
    x = as_batch(x, config.input_dim)
    layer_forward, _ = _LAYERS[config.cell]

    inputs, caches = [], []
    sequence = x
    for layer in range(config.n_l):
        W, U, b = weights.layer(layer)
        inputs.append(sequence)
        sequence, cache = layer_forward(sequence, W, U, b)
        caches.append(cache)

    h_last = sequence[:, -1]
    z_pre = h_last @ weights["W_zh"].T + weights["b_z"]
    z = np.maximum(z_pre, 0.0)
    theta_hat = z @ weights["W_tz"].T + weights["b_t"]
    return theta_hat, ForwardCache(inputs, caches, h_last, z_pre, z)


def forward(weights: RnnWeights, y_sequence) -> np.ndarray:
    """θ̂ for one sequence of per-step inputs."""
    x = np.asarray(y_sequence, dtype=np.float64).reshape(1, -1, weights.config.input_dim)
    theta_hat, _ = forward_batch(weights, x)
    return theta_hat[0]


def loss_mse(theta_hat_batch, theta_batch) -> float:
    """Mean over the batch of ‖θ − θ̂‖²."""
    theta_hat_batch = np.atleast_2d(np.asarray(theta_hat_batch, dtype=np.float64))
    theta_batch = np.atleast_2d(np.asarray(theta_batch, dtype=np.float64))
    if theta_hat_batch.shape != theta_batch.shape:
        raise InvalidSpecError(f"batch shapes differ: {theta_hat_batch.shape} vs {theta_batch.shape}")
    if theta_batch.shape[0] == 0:
        raise InvalidSpecError("loss of an empty batch is undefined")
    return float(np.mean(np.sum((theta_hat_batch - theta_batch) ** 2, axis=1)))


def backward(weights: RnnWeights, cache: ForwardCache, theta_hat: np.ndarray, theta: np.ndarray) -> Gradients:
    """Gradients of loss_mse(theta_hat, theta) with respect to every array in `weights`."""
    config = weights.config
    theta = np.atleast_2d(np.asarray(theta, dtype=np.float64))
    batch = theta.shape[0]
    _, layer_backward = _LAYERS[config.cell]
    grads = weights.zeros_like()

    d_theta = 2.0 * (theta_hat - theta) / batch
    grads["W_tz"] = d_theta.T @ cache.z
    grads["b_t"] = d_theta.sum(axis=0)
    d_z_pre = (d_theta @ weights["W_tz"]) * (cache.z_pre > 0.0)
    grads["W_zh"] = d_z_pre.T @ cache.h_last
    grads["b_z"] = d_z_pre.sum(axis=0)

    top_input = cache.inputs[-1]
    d_outputs = np.zeros((batch, top_input.shape[1], config.n_H))
    d_outputs[:, -1] = d_z_pre @ weights["W_zh"]

    for layer in reversed(range(config.n_l)):
        W, U, _ = weights.layer(layer)
        layer_grads, d_outputs = layer_backward(cache.inputs[layer], W, U, cache.layer_caches[layer], d_outputs)
        for name, value in layer_grads.items():
            grads[layer_key(layer, name)] = value

    for key, value in grads.items():
        if not np.all(np.isfinite(value)):
            raise NonFiniteGradientError(f"gradient of {key} is not finite")
    return grads


def loss_and_gradients(weights: RnnWeights, x: np.ndarray, theta: np.ndarray) -> Tuple[float, Gradients]:
    theta_hat, cache = forward_batch(weights, x)
    return loss_mse(theta_hat, theta), backward(weights, cache, theta_hat, theta)

