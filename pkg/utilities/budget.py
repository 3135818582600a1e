import logging
import threading
import time
from typing import Optional

from utilities.errors import BudgetExceededError

DEFAULT_MAX_PAIRS = 1_000_000
DEFAULT_MAX_SECONDS = 600.0


class Budget:
    """Pair and wall-clock allowance for one expensive computation.

    A budget starts its clock on the first charge so that a config object can
    be built early and handed to the worker that does the real work.
    """

    def __init__(
        self,
        max_pairs: Optional[int] = DEFAULT_MAX_PAIRS,
        max_seconds: Optional[float] = DEFAULT_MAX_SECONDS,
        label: str = "computation",
    ):
        self._logger = logging.getLogger(__name__)
        self.max_pairs: Optional[int] = max_pairs
        self.max_seconds: Optional[float] = max_seconds
        self.label = label
        self._pairs = 0
        self._steps = 0
        self._started: Optional[float] = None
        self._lock = threading.Lock()

    @classmethod
    def unlimited(cls, label: str = "computation") -> "Budget":
        return cls(max_pairs=None, max_seconds=None, label=label)

    def fresh(self, label: Optional[str] = None) -> "Budget":
        return Budget(self.max_pairs, self.max_seconds, label or self.label)

    @property
    def pairs(self) -> int:
        return self._pairs

    @property
    def elapsed(self) -> float:
        if self._started is None:
            return 0.0
        return time.monotonic() - self._started

    def stats(self) -> dict:
        return {"pairs": self._pairs, "steps": self._steps, "label": self.label}

    def charge(self, pairs: int = 1):
        """Record `pairs` units of work and raise once the allowance is spent."""
        with self._lock:
            if self._started is None:
                self._started = time.monotonic()
            self._pairs += pairs
            over_pairs = self.max_pairs is not None and self._pairs > self.max_pairs
        if over_pairs:
            self._fail(f"{self.label}: pair budget of {self.max_pairs} exhausted")
        self.check()

    def step(self):
        """Count a unit of non-pair work (expansion nodes, retries) and check the clock."""
        with self._lock:
            if self._started is None:
                self._started = time.monotonic()
            self._steps += 1
        if self._steps % 256 == 0:
            self.check()

    def check(self):
        if self.max_seconds is None or self._started is None:
            return
        if time.monotonic() - self._started > self.max_seconds:
            self._fail(f"{self.label}: time budget of {self.max_seconds:.0f}s exhausted")

    def _fail(self, message: str):
        self._logger.warning("[budget] %s after %d pairs", message, self._pairs)
        raise BudgetExceededError(message, self.stats())
