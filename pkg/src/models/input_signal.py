from typing import Any, Dict

from enums.signal_kind import InputKind
from exceptions.deepbayes_exceptions.exceptions import InvalidSpecError


class InputSignal:
    """Description of an input sequence; `generate_input` turns it into samples."""

    def __init__(self, data: Dict[str, Any]):
        self.kind: str = data.get("kind", InputKind.COSINE.value)
        self.length: int = data.get("length")
        self.amplitude: float = float(data.get("amplitude", 1.0))
        self.hold: int = data.get("hold", 1)
        self.seed: int = int(data.get("seed", 0))

        self._validate()

    def _validate(self):
        if not InputKind.is_valid(self.kind):
            raise InvalidSpecError(f"input kind must be one of {InputKind.get_valid_kinds()}, got {self.kind!r}")
        if not isinstance(self.length, int) or isinstance(self.length, bool) or self.length < 1:
            raise InvalidSpecError(f"input length must be a positive integer, got {self.length!r}")
        if not isinstance(self.hold, int) or isinstance(self.hold, bool) or self.hold < 1:
            raise InvalidSpecError(f"input hold must be a positive integer, got {self.hold!r}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "length": self.length,
            "amplitude": self.amplitude,
            "hold": self.hold,
            "seed": self.seed,
        }
