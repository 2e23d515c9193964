"""Tests for the cli_errors decorator."""

from unittest.mock import MagicMock, patch

import pytest

from euler_entropy.cli.errors import (
    EXIT_BUDGET,
    EXIT_OK,
    EXIT_VALIDATION,
    cli_errors,
)
from euler_entropy.errors import (
    BudgetExceededError,
    EdgeCapExceeded,
    GeneratorSpecError,
    ValidationError,
)


def test_cli_errors_no_error() -> None:
    """Check that the return value is passed through."""
    func_mock = MagicMock(return_value=EXIT_OK)

    def func(*args, **kwargs):
        return func_mock(*args, **kwargs)

    assert cli_errors(func)(1, 2, x=3) == EXIT_OK
    func_mock.assert_called_once_with(1, 2, x=3)


@pytest.mark.parametrize(
    "error,code",
    (
        (ValidationError("bad"), EXIT_VALIDATION),
        (GeneratorSpecError("bad spec"), EXIT_VALIDATION),
        (BudgetExceededError("too big"), EXIT_BUDGET),
        (EdgeCapExceeded(40, 34), EXIT_BUDGET),
    ),
)
@patch("euler_entropy.cli.errors._error_occurred")
def test_cli_errors_error(
    error_mock: MagicMock, error: Exception, code: int
) -> None:
    """Check that the package's errors are logged and mapped to exit codes."""

    def func():
        raise error

    assert cli_errors(func)() == code
    error_mock.assert_called_once_with(error)


def test_cli_errors_other_error() -> None:
    """Check that other exceptions propagate."""

    def func():
        raise KeyError("x")

    with pytest.raises(KeyError):
        cli_errors(func)()
