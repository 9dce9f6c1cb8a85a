from typing import Iterable, List, Optional

import numpy as np

from exceptions.deepbayes_exceptions.exceptions import InvalidSpecError


class ThetaVector:
    """
    Real parameter vector with an optional positivity mask.
    Masked components model variances and must be strictly positive.
    """

    def __init__(self, values: Iterable[float], positivity_mask: Optional[Iterable[bool]] = None):
        self.values: np.ndarray = np.array(values, dtype=np.float64).reshape(-1)
        if positivity_mask is None:
            self.positivity_mask: np.ndarray = np.zeros(self.values.shape, dtype=bool)
        else:
            self.positivity_mask = np.array(positivity_mask, dtype=bool).reshape(-1)

        self._validate()

    def _validate(self):
        if self.values.size == 0:
            raise InvalidSpecError("theta must have at least one component")
        if self.positivity_mask.shape != self.values.shape:
            raise InvalidSpecError(
                f"positivity_mask has {self.positivity_mask.size} entries, theta has {self.values.size}"
            )
        if not np.all(np.isfinite(self.values)):
            raise InvalidSpecError(f"theta has non-finite components: {self.values.tolist()}")
        bad = np.flatnonzero(self.positivity_mask & (self.values <= 0.0))
        if bad.size:
            raise InvalidSpecError(f"theta components {bad.tolist()} must be strictly positive")

    def __len__(self) -> int:
        return int(self.values.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ThetaVector):
            return NotImplemented
        return np.array_equal(self.values, other.values) and np.array_equal(
            self.positivity_mask, other.positivity_mask
        )

    def __repr__(self) -> str:
        return f"ThetaVector({self.values.tolist()})"

    def to_dict(self) -> dict:
        return {"values": self.values.tolist(), "positive": self.positivity_mask.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "ThetaVector":
        return cls(data["values"], data.get("positive"))

    def tolist(self) -> List[float]:
        return self.values.tolist()
