"""Provides a decorator mapping errors to exit codes for command-line entry points."""

import logging
import traceback
from collections.abc import Callable

from decorator import decorator

from euler_entropy.errors import BudgetExceededError, ValidationError

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_BUDGET = 2


def _error_occurred(error: BaseException) -> None:
    """Log an error along with its stack trace."""
    traceback_str = "".join(traceback.format_tb(error.__traceback__))
    logging.error(f"{type(error).__name__}: {error!s}\n\n{traceback_str}")


def _cli_errors(func: Callable, *args, **kwargs) -> int:
    try:
        return func(*args, **kwargs)
    except ValidationError as error:
        _error_occurred(error)
        return EXIT_VALIDATION
    except BudgetExceededError as error:
        _error_occurred(error)
        return EXIT_BUDGET


cli_errors = decorator(_cli_errors)
"""Catch the package's errors, log them and return the matching exit code.

Any other exception propagates.
"""
