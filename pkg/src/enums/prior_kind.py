"""
Enum definitions for prior components.
"""

from enum import Enum


class PriorKind(Enum):
    UNIFORM = "uniform"
    GAUSSIAN = "gaussian"

    @classmethod
    def get_valid_kinds(cls) -> list:
        return [kind.value for kind in cls]

    @classmethod
    def is_valid(cls, kind: str) -> bool:
        return kind in cls.get_valid_kinds()
