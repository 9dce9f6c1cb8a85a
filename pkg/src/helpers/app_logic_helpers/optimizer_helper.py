"""
Adam with global-norm gradient clipping, and the step-wise learning-rate schedule.
"""

import math
from collections import OrderedDict
from typing import Any, Dict, Optional, Tuple

import numpy as np

from config.defaults import ADAM_BETA1, ADAM_BETA2, ADAM_EPSILON
from exceptions.deepbayes_exceptions.exceptions import InvalidSpecError, NonFiniteGradientError
from helpers.common_helper.logger_helper import LoggerHelper

logger = LoggerHelper(__name__).get_logger()


class AdamState:
    """First and second moment estimates per parameter array plus the step counter t."""

    def __init__(self, beta1: float = ADAM_BETA1, beta2: float = ADAM_BETA2, epsilon: float = ADAM_EPSILON):
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon
        self.t: int = 0
        self.m: "OrderedDict[str, np.ndarray]" = OrderedDict()
        self.v: "OrderedDict[str, np.ndarray]" = OrderedDict()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "beta1": self.beta1,
            "beta2": self.beta2,
            "epsilon": self.epsilon,
            "t": self.t,
            "m": {key: value.ravel().tolist() for key, value in self.m.items()},
            "v": {key: value.ravel().tolist() for key, value in self.v.items()},
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any], shapes: Dict[str, Tuple[int, ...]]) -> "AdamState":
        state = cls(data["beta1"], data["beta2"], data["epsilon"])
        state.t = int(data["t"])
        for key, shape in shapes.items():
            if key in data["m"]:
                state.m[key] = np.asarray(data["m"][key], dtype=np.float64).reshape(shape)
                state.v[key] = np.asarray(data["v"][key], dtype=np.float64).reshape(shape)
        return state


def clip_by_global_norm(grads: Dict[str, np.ndarray], clip_norm: Optional[float]) -> Tuple[Dict[str, np.ndarray], float]:
    norm = float(np.sqrt(sum(float(np.sum(g * g)) for g in grads.values())))
    if not np.isfinite(norm):
        raise NonFiniteGradientError("gradient norm is not finite")
    if clip_norm is None or norm <= clip_norm:
        return grads, norm
    scale = clip_norm / norm
    return OrderedDict((key, g * scale) for key, g in grads.items()), norm


def adam_step(state: AdamState, params: Dict[str, np.ndarray], grads: Dict[str, np.ndarray],
              eta: float, clip_norm: Optional[float] = None) -> Tuple[Dict[str, np.ndarray], AdamState]:
    """
    One bias-corrected Adam update, applied in place to `params`.
    Gradients are clipped to `clip_norm` (global L2 norm) before the moments see them.
    """
    grads, _ = clip_by_global_norm(grads, clip_norm)

    state.t += 1
    beta1, beta2 = state.beta1, state.beta2
    correction1 = 1.0 - beta1 ** state.t
    correction2 = 1.0 - beta2 ** state.t
    for key, grad in grads.items():
        if key not in state.m:
            state.m[key] = np.zeros_like(grad)
            state.v[key] = np.zeros_like(grad)
        m = state.m[key]
        v = state.v[key]
        m *= beta1
        m += (1.0 - beta1) * grad
        v *= beta2
        v += (1.0 - beta2) * grad * grad
        params[key] -= eta * (m / correction1) / (np.sqrt(v / correction2) + state.epsilon)
    return params, state


def lr_schedule(eta0: float, decay_factor: float, epochs: int, epoch: int) -> float:
    """eta0 · decay_factor^⌊3(epoch − 1)/epochs⌋: one decay at each third of the run."""
    if not 1 <= epoch <= epochs:
        raise InvalidSpecError(f"epoch must lie in 1..{epochs}, got {epoch}")
    return eta0 * decay_factor ** math.floor(3 * (epoch - 1) / epochs)
