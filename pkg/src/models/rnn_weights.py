"""
Parameters of the recurrent estimator.

Each layer l keeps its gates stacked row-wise:
    layer{l}.W  (G·n_H × input width)
    layer{l}.U  (G·n_H × n_H)
    layer{l}.b  (G·n_H)
with gate blocks ordered (update, reset, candidate) for GRU and (input, forget, output, cell)
for LSTM. The dense head is W_zh, b_z, W_tz, b_t.
"""

from collections import OrderedDict
from typing import Any, Dict, Iterator, Tuple

import numpy as np

from exceptions.deepbayes_exceptions.exceptions import InvalidSpecError
from models.rnn_config import RnnConfig

HEAD_KEYS = ("W_zh", "b_z", "W_tz", "b_t")


def layer_key(layer: int, name: str) -> str:
    return f"layer{layer}.{name}"


def expected_shapes(config: RnnConfig) -> "OrderedDict[str, Tuple[int, ...]]":
    shapes: "OrderedDict[str, Tuple[int, ...]]" = OrderedDict()
    rows = config.gate_count * config.n_H
    for layer in range(config.n_l):
        width = config.input_dim if layer == 0 else config.n_H
        shapes[layer_key(layer, "W")] = (rows, width)
        shapes[layer_key(layer, "U")] = (rows, config.n_H)
        shapes[layer_key(layer, "b")] = (rows,)
    shapes["W_zh"] = (config.n_z, config.n_H)
    shapes["b_z"] = (config.n_z,)
    shapes["W_tz"] = (config.d, config.n_z)
    shapes["b_t"] = (config.d,)
    return shapes


class RnnWeights:

    def __init__(self, config: RnnConfig, params: Dict[str, np.ndarray]):
        self.config: RnnConfig = config
        self.params: "OrderedDict[str, np.ndarray]" = OrderedDict(
            (key, np.asarray(params[key], dtype=np.float64)) for key in expected_shapes(config) if key in params
        )

        self._validate(params)

    def _validate(self, given: Dict[str, np.ndarray]):
        shapes = expected_shapes(self.config)
        unknown = sorted(set(given) - set(shapes))
        if unknown:
            raise InvalidSpecError(f"unexpected weight arrays {unknown}")
        for key, shape in shapes.items():
            if key not in self.params:
                raise InvalidSpecError(f"missing weight array {key}")
            if self.params[key].shape != shape:
                raise InvalidSpecError(f"{key} has shape {self.params[key].shape}, expected {shape}")
            if not np.all(np.isfinite(self.params[key])):
                raise InvalidSpecError(f"{key} has non-finite entries")

    def __getitem__(self, key: str) -> np.ndarray:
        return self.params[key]

    def items(self) -> Iterator[Tuple[str, np.ndarray]]:
        return iter(self.params.items())

    def layer(self, index: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (
            self.params[layer_key(index, "W")],
            self.params[layer_key(index, "U")],
            self.params[layer_key(index, "b")],
        )

    @property
    def parameter_count(self) -> int:
        return int(sum(array.size for array in self.params.values()))

    def copy(self) -> "RnnWeights":
        return RnnWeights(self.config, {key: array.copy() for key, array in self.params.items()})

    def zeros_like(self) -> Dict[str, np.ndarray]:
        return OrderedDict((key, np.zeros_like(array)) for key, array in self.params.items())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "config": self.config.to_dict(),
            "arrays": {key: {"shape": list(array.shape), "values": array.ravel().tolist()} for key, array in self.items()},
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RnnWeights":
        config = RnnConfig(data["config"])
        params = {
            key: np.asarray(entry["values"], dtype=np.float64).reshape(entry["shape"])
            for key, entry in data["arrays"].items()
        }
        return cls(config, params)
