"""
Enum definitions for recurrent estimator architectures.
"""

from enum import Enum


class CellType(Enum):
    """Recurrent cell used in every layer of the estimator."""
    GRU = "gru"
    LSTM = "lstm"

    @property
    def gate_count(self) -> int:
        return 3 if self is CellType.GRU else 4

    @classmethod
    def get_valid_cells(cls) -> list:
        return [cell.value for cell in cls]

    @classmethod
    def is_valid(cls, cell: str) -> bool:
        return cell in cls.get_valid_cells()
