"""Step budgets for the exhaustive kernels.

Every exhaustive search in the package counts the states it visits against a Budget.
Exceeding the budget raises an error rather than silently truncating the search, and
progress is broadcast via pubsub so that the command-line tool can log it.
"""

from __future__ import annotations

import logging
import os
import threading

from pubsub import pub

from euler_entropy import config
from euler_entropy.errors import RunConfigError, StateBudgetExceeded


def resolve_cap(default: int) -> int:
    """Return the enumeration cap, honouring the budget environment variable.

    Args:
        default: The cap to use if the environment variable is not set
    Raises:
        RunConfigError: The environment variable is not a positive integer
    """
    value = os.environ.get(config.BUDGET_ENV_VAR)
    if not value:
        return default

    try:
        cap = int(value)
    except ValueError:
        raise RunConfigError(f"{config.BUDGET_ENV_VAR} must be an integer: {value!r}")
    if cap <= 0:
        raise RunConfigError(f"{config.BUDGET_ENV_VAR} must be positive: {cap}")

    logging.debug(f"Using cap of {cap} from {config.BUDGET_ENV_VAR}")
    return cap


def progress_topic(name: str) -> str:
    """Get the pubsub topic on which progress for the named kernel is sent."""
    return f"{config.PROGRESS_TOPIC}.{name}"


def send_progress(name: str, done: int, total: int | None = None) -> None:
    """Broadcast progress of a kernel.

    Args:
        name: The name of the kernel
        done: Amount of work completed so far
        total: Total amount of work, if known (else None)
    """
    pub.sendMessage(progress_topic(name), done=done, total=total)


class Budget:
    """Counts the steps taken by a search and stops it when the limit is passed."""

    def __init__(
        self,
        name: str,
        limit: int,
        error: type[StateBudgetExceeded] = StateBudgetExceeded,
    ) -> None:
        """Create a new Budget.

        Args:
            name: Name of the kernel (used in errors and progress topics)
            limit: The maximum number of steps allowed
            error: The type of exception raised when the limit is passed
        """
        self.name = name
        self.limit = limit
        self.error = error
        self.used = 0
        self._next_report = config.PROGRESS_INTERVAL
        self._lock = threading.Lock()

    def tick(self, steps: int = 1) -> None:
        """Record that steps have been taken.

        Raises:
            StateBudgetExceeded: If the budget has been exhausted
        """
        with self._lock:
            self.used += steps
            used = self.used
            report = used >= self._next_report
            if report:
                self._next_report += config.PROGRESS_INTERVAL

        if used > self.limit:
            raise self.error(self.name, self.limit)
        if report:
            send_progress(self.name, used, self.limit)

    @property
    def remaining(self) -> int:
        """The number of steps left."""
        return max(self.limit - self.used, 0)
