"""Tests for writing JSON and CSV reports."""

import json
import math
from fractions import Fraction
from pathlib import Path
from unittest.mock import MagicMock, Mock, call, patch

import pytest

from euler_entropy import config
from euler_entropy.reports import (
    app_metadata,
    build_report,
    dumps_report,
    to_plain,
    write_csv_report,
    write_json_report,
)


@pytest.mark.parametrize(
    "value,expected",
    (
        (None, None),
        (True, True),
        ("text", "text"),
        (42, 42),
        (2**60, str(2**60)),
        (-(2**53), str(-(2**53))),
        (1.5, 1.5),
        (math.inf, "inf"),
        (math.nan, "nan"),
        (Fraction(2, 6), {"num": 1, "den": 3}),
        ({3, 1, 2}, [1, 2, 3]),
        ((1, (2, 3)), [1, [2, 3]]),
        ({4: Fraction(1, 2)}, {"4": {"num": 1, "den": 2}}),
    ),
)
def test_to_plain(value, expected) -> None:
    """Check the conversion of values for reports."""
    assert to_plain(value) == expected


def test_to_plain_unknown_type() -> None:
    """Check that unsupported values are rejected."""
    with pytest.raises(TypeError):
        to_plain(object())


def test_build_report() -> None:
    """Check the layout of a report."""
    report = build_report({"eo": 24}, {"command": "eo"})
    assert report == {
        "app": {"name": config.APP_NAME, "version": config.APP_VERSION},
        "config": {"command": "eo"},
        "result": {"eo": 24},
    }


def test_dumps_report_deterministic() -> None:
    """Check that key order does not affect the output."""
    first = dumps_report({"b": 1, "a": [1, 2]}, {"seed": 1, "command": "mc"})
    second = dumps_report({"a": [1, 2], "b": 1}, {"command": "mc", "seed": 1})
    assert first == second
    assert first.endswith("}\n")
    assert json.loads(first)["result"] == {"a": [1, 2], "b": 1}


def test_write_json_report(tmp_path: Path) -> None:
    """Check that the report is written to the file and returned."""
    path = tmp_path / "report.json"
    text = write_json_report(path, {"x": 1}, {"command": "eo"})
    assert path.read_text() == text


def test_write_json_report_no_path() -> None:
    """Check that the text is returned when no path is given."""
    text = write_json_report(None, {"x": 1}, {"command": "eo"})
    assert json.loads(text)["result"] == {"x": 1}


@patch("euler_entropy.reports.Writer")
def test_write_csv_report(csv_writer_mock: Mock) -> None:
    """Check that the header and rows are written with the metadata."""
    csv_writer = MagicMock()
    csv_writer_mock.return_value = csv_writer
    path = Path("/my/report.csv")
    write_csv_report(path, ("M", "bound"), [(0, 1.0), (1, 0.5)], {"seed": 3})

    csv_writer_mock.assert_called_once_with(
        path,
        {
            "encoding": "utf-8",
            "name": "report.csv",
            "system": {"app": app_metadata()},
            "config": {"seed": 3},
        },
    )
    assert csv_writer.writerow.call_args_list == [
        call(("M", "bound")),
        call((0, 1.0)),
        call((1, 0.5)),
    ]
    csv_writer.close.assert_called_once_with()


@patch("euler_entropy.reports.Writer")
def test_write_csv_report_error(csv_writer_mock: Mock) -> None:
    """Check that the file is closed if writing fails."""
    csv_writer = MagicMock()
    csv_writer.writerow.side_effect = OSError()
    csv_writer_mock.return_value = csv_writer
    with pytest.raises(OSError):
        write_csv_report(Path("/my/report.csv"), ("M",), [], {})
    csv_writer.close.assert_called_once_with()
