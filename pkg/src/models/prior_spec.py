"""
Prior distributions over parameter vectors.
A prior is an ordered list of components; a uniform component covers one parameter,
a Gaussian component covers len(mean) consecutive parameters.
"""

from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from config.model_constants import VARIANCE_PRIOR_EPSILON
from enums.prior_kind import PriorKind
from exceptions.deepbayes_exceptions.exceptions import InvalidSpecError


class UniformPrior:
    kind = PriorKind.UNIFORM.value

    def __init__(self, a: float, b: float, positive: bool = False):
        self.a: float = float(a)
        self.b: float = float(b)
        self.positive: bool = bool(positive)

        self._validate()

    def _validate(self):
        if not (np.isfinite(self.a) and np.isfinite(self.b)):
            raise InvalidSpecError(f"uniform bounds must be finite, got [{self.a}, {self.b}]")
        if self.a >= self.b:
            raise InvalidSpecError(f"uniform prior needs a < b, got [{self.a}, {self.b}]")
        if self.positive and self.a < VARIANCE_PRIOR_EPSILON:
            raise InvalidSpecError(
                f"variance prior must start at or above {VARIANCE_PRIOR_EPSILON}, got a={self.a}"
            )

    @property
    def size(self) -> int:
        return 1

    def mean(self) -> np.ndarray:
        return np.array([0.5 * (self.a + self.b)])

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        draws = rng.uniform(self.a, self.b, size=(count, 1))
        # uniform() is half-open; keep draws inside [a, b] even when b - a is tiny
        return np.clip(draws, self.a, self.b)

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "a": self.a, "b": self.b, "positive": self.positive}


class GaussianPrior:
    kind = PriorKind.GAUSSIAN.value

    def __init__(self, mean, covariance):
        self.mean_vector: np.ndarray = np.asarray(mean, dtype=np.float64).reshape(-1)
        self.covariance: np.ndarray = np.atleast_2d(np.asarray(covariance, dtype=np.float64))

        self._validate()

    def _validate(self):
        d = self.mean_vector.size
        if d == 0:
            raise InvalidSpecError("Gaussian prior needs a non-empty mean")
        if self.covariance.shape != (d, d):
            raise InvalidSpecError(f"covariance must be {d}x{d}, got {self.covariance.shape}")
        if not (np.all(np.isfinite(self.mean_vector)) and np.all(np.isfinite(self.covariance))):
            raise InvalidSpecError("Gaussian prior has non-finite entries")
        if not np.allclose(self.covariance, self.covariance.T, rtol=0.0, atol=1e-12):
            raise InvalidSpecError("covariance must be symmetric")
        eigenvalues = np.linalg.eigvalsh(self.covariance)
        scale = max(1.0, float(np.max(np.abs(eigenvalues))))
        if eigenvalues.min() < -1e-12 * scale:
            raise InvalidSpecError(f"covariance is not positive semi-definite (min eigenvalue {eigenvalues.min():.3e})")

    @property
    def size(self) -> int:
        return int(self.mean_vector.size)

    def mean(self) -> np.ndarray:
        return self.mean_vector.copy()

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        return rng.multivariate_normal(self.mean_vector, self.covariance, size=count, method="eigh")

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "mean": self.mean_vector.tolist(), "covariance": self.covariance.tolist()}


class PriorSpec:
    """Product prior over independent components."""

    def __init__(self, components: List):
        self.components: List = list(components)

        self._validate()

    def _validate(self):
        if not self.components:
            raise InvalidSpecError("prior needs at least one component")

    @property
    def dim(self) -> int:
        return sum(component.size for component in self.components)

    @property
    def positivity_mask(self) -> np.ndarray:
        mask = []
        for component in self.components:
            mask.extend([getattr(component, "positive", False)] * component.size)
        return np.array(mask, dtype=bool)

    def mean(self) -> np.ndarray:
        return np.concatenate([component.mean() for component in self.components])

    def bounds(self) -> Optional[List[Tuple[float, float]]]:
        """Per-component (a, b) box, or None when any component has unbounded support."""
        box = []
        for component in self.components:
            if not isinstance(component, UniformPrior):
                return None
            box.append((component.a, component.b))
        return box

    def contains(self, values) -> bool:
        values = np.asarray(values, dtype=np.float64).reshape(-1)
        if values.size != self.dim or not np.all(np.isfinite(values)):
            return False
        position = 0
        for component in self.components:
            if isinstance(component, UniformPrior):
                value = values[position]
                if value < component.a or value > component.b:
                    return False
            position += component.size
        return True

    def to_dict(self) -> Dict[str, Any]:
        return {"components": [component.to_dict() for component in self.components]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PriorSpec":
        components = []
        for entry in data.get("components", []):
            kind = entry.get("kind")
            if kind == PriorKind.UNIFORM.value:
                components.append(UniformPrior(entry["a"], entry["b"], entry.get("positive", False)))
            elif kind == PriorKind.GAUSSIAN.value:
                components.append(GaussianPrior(entry["mean"], entry["covariance"]))
            else:
                raise InvalidSpecError(f"prior kind must be one of {PriorKind.get_valid_kinds()}, got {kind!r}")
        return cls(components)

    @classmethod
    def uniform_box(cls, box, positive_mask=None) -> "PriorSpec":
        positive_mask = positive_mask or [False] * len(box)
        return cls([UniformPrior(a, b, positive) for (a, b), positive in zip(box, positive_mask)])
