import pytest

from exceptions.deepbayes_exceptions.exceptions import InvalidSpecError
from helpers.app_logic_helpers.early_stopping_helper import early_stop_update
from models.early_stop_state import EarlyStopState


def _run(losses, patience=3, tolerance=5e-3):
    state = EarlyStopState()
    for epoch, loss in enumerate(losses, start=1):
        state, stop = early_stop_update(state, loss, epoch, patience, tolerance, weights=f"w{epoch}")
        if stop:
            return state, epoch
    return state, None


def test_constant_loss_stops_after_three_qualifying_epochs():
    state, stopped = _run([0.5] * 10, patience=3)
    # epoch 1 has nothing to compare against, so epochs 2, 3 and 4 qualify
    assert stopped == 4
    assert state.flag
    assert state.j == 3
    assert state.best_epoch == 4
    assert state.best_weights == "w4"


def test_halving_loss_never_stops():
    losses = [2.0 ** -k for k in range(40)]
    state, stopped = _run(losses, patience=3, tolerance=1e-2)
    assert stopped is None
    assert not state.flag
    assert state.j == 1


def test_counter_resets_after_a_miss():
    state, stopped = _run([1.0, 1.0, 2.0, 2.0], patience=3)
    assert stopped is None
    assert state.j == 1
    assert state.e_prev == 4


def test_run_must_be_consecutive():
    # qualifying epochs 2, 3, then a miss, then 5, 6, 7
    state, stopped = _run([1.0, 1.0, 1.0, 3.0, 3.0, 3.0, 3.0], patience=3)
    assert stopped == 7


def test_lowest_loss_is_tracked():
    state, _ = _run([3.0, 1.0, 2.0])
    assert state.lowest_epoch == 2
    assert state.lowest_val_loss == 1.0


def test_patience_one_stops_at_first_qualifying_epoch():
    _, stopped = _run([1.0, 5.0, 5.0], patience=1)
    assert stopped == 3


def test_non_finite_loss():
    with pytest.raises(InvalidSpecError):
        early_stop_update(EarlyStopState(), float("nan"), 1, 3, 5e-3)
