"""
Enum definitions for input signals.
"""

from enum import Enum


class InputKind(Enum):
    COSINE = "cosine_1p2"    # u_k = cos(1.2 k), deterministic
    UNIFORM = "uniform01"    # u_k ~ U[0, 1], seeded
    PRBS = "prbs"            # ±amplitude held over fixed windows, seeded

    @classmethod
    def get_valid_kinds(cls) -> list:
        return [kind.value for kind in cls]

    @classmethod
    def is_valid(cls, kind: str) -> bool:
        return kind in cls.get_valid_kinds()
