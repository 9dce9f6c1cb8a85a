import functools
import hashlib
import json
import time
import logging
from typing import Any, Callable, Dict, Iterable, Optional

from exceptions.deepbayes_exceptions.exceptions import ConfigError


def require_keys(payload: Dict, keys: Iterable[str], section: str = "") -> None:
    missing = [k for k in keys if k not in payload]
    if missing:
        prefix = f"{section}." if section else ""
        raise ConfigError(
            f"Missing required keys: {', '.join(prefix + k for k in missing)}",
            key=prefix + missing[0],
        )


def reject_unknown_keys(payload: Dict, allowed: Iterable[str], section: str = "") -> None:
    allowed = set(allowed)
    unknown = sorted(k for k in payload if k not in allowed)
    if unknown:
        prefix = f"{section}." if section else ""
        raise ConfigError(
            f"Unknown keys: {', '.join(prefix + k for k in unknown)}",
            key=prefix + unknown[0],
        )


def fingerprint(payload: Any) -> str:
    """Stable short hash of a JSON-serialisable payload."""
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


class Timed:
    """
    A decorator that measures wall-clock time of every call.
    The last duration and the running total are kept on the wrapper so reports can read them.

    Args:
        label: Name used in the debug log line (default: the wrapped function's name)

    Example usage:
    ```
    @Timed()
    def predict(y):
        return estimator.predict(y)

    predict(y)
    seconds = predict.last_seconds
    ```
    """

    def __init__(self, label: Optional[str] = None):
        self.label = label
        self.logger = logging.getLogger("timed")

    def __call__(self, func: Callable) -> Callable:
        label = self.label or func.__name__

        @functools.wraps(func)
        def wrapper(*args, **kwargs) -> Any:
            start = time.perf_counter()
            try:
                return func(*args, **kwargs)
            finally:
                elapsed = time.perf_counter() - start
                wrapper.last_seconds = elapsed
                wrapper.total_seconds += elapsed
                wrapper.calls += 1
                self.logger.debug("%s took %.6f s", label, elapsed)

        wrapper.last_seconds = 0.0
        wrapper.total_seconds = 0.0
        wrapper.calls = 0
        return wrapper
