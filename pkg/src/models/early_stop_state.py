from typing import Any, Dict, Optional

from exceptions.deepbayes_exceptions.exceptions import InvalidSpecError


class EarlyStopState:
    """
    Bookkeeping of the early-stopping rule.

    j          length of the current run of qualifying epochs (reset to 1 on a miss)
    prev_val_loss validation loss of the previous epoch
    e_prev     last epoch whose relative change qualified
    flag       set once j reaches the patience
    best_*     checkpoint kept on stop
    lowest_*   lowest validation loss seen, kept for reporting
    """

    def __init__(self):
        self.j: int = 1
        self.prev_val_loss: Optional[float] = None
        self.e_prev: Optional[int] = None
        self.flag: bool = False
        self.best_epoch: Optional[int] = None
        self.best_weights = None
        self.best_val_loss: Optional[float] = None
        self.lowest_epoch: Optional[int] = None
        self.lowest_val_loss: Optional[float] = None

    def _validate(self, patience: int):
        if self.j < 1:
            raise InvalidSpecError(f"early-stop counter must be at least 1, got {self.j}")
        if self.flag and self.j != patience:
            raise InvalidSpecError(f"stop flag set with j={self.j}, patience={patience}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "j": self.j,
            "prev_val_loss": self.prev_val_loss,
            "e_prev": self.e_prev,
            "flag": self.flag,
            "best_epoch": self.best_epoch,
            "best_val_loss": self.best_val_loss,
            "lowest_epoch": self.lowest_epoch,
            "lowest_val_loss": self.lowest_val_loss,
        }
