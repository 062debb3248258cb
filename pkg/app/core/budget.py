"""
Wall-clock budget for long experiments.

Searches call `check()` at loop heads; exceeding the deadline raises
TimeLimitExceeded (exit code 2 at the CLI).
"""
import time
from typing import Optional
from app.core.config import settings
from app.core.exceptions import ResourceError


class Budget:
    def __init__(self, seconds: Optional[float] = None):
        self.seconds = seconds if seconds is not None else settings.EXPERIMENT_TIMEOUT_SECONDS
        self.started = time.monotonic()

    @property
    def elapsed(self) -> float:
        return time.monotonic() - self.started

    def check(self) -> None:
        if self.elapsed > self.seconds:
            raise ResourceError(
                "TimeLimitExceeded",
                f"experiment exceeded {self.seconds}s wall-clock budget",
            )


def unlimited() -> Budget:
    return Budget(float("inf"))
