"""Writing reports as JSON or as CSV files with YAML front matter.

Reports never contain timestamps or platform details, so that running a command
twice with the same configuration gives byte-identical files.
"""

from __future__ import annotations

import json
import logging
import math
from collections.abc import Iterable, Mapping, Sequence
from fractions import Fraction
from pathlib import Path
from typing import Any

from csvy import Writer

from euler_entropy import config

MAX_EXACT_FLOAT_INT = 2**53
"""Integers at least this large are written as decimal strings."""


def app_metadata() -> dict[str, str]:
    """Get the name and version of the tool."""
    return {"name": config.APP_NAME, "version": config.APP_VERSION}


def to_plain(value: Any) -> Any:
    """Convert a value to something json.dumps writes deterministically.

    Fractions become numerator/denominator pairs, sets become sorted lists, large
    integers become decimal strings and non-finite floats become strings.
    """
    match value:
        case bool() | None | str():
            return value
        case int():
            return str(value) if abs(value) >= MAX_EXACT_FLOAT_INT else value
        case float():
            return value if math.isfinite(value) else str(value)
        case Fraction():
            num, den = value.numerator, value.denominator
            return {"num": to_plain(num), "den": to_plain(den)}
        case Mapping():
            return {str(k): to_plain(v) for k, v in value.items()}
        case frozenset() | set():
            return [to_plain(v) for v in sorted(value)]
        case Iterable():
            return [to_plain(v) for v in value]
    raise TypeError(f"Cannot write {type(value).__name__} to a report")


def build_report(result: Mapping[str, Any], run_config: Mapping[str, Any]) -> dict:
    """Wrap the result of a command with the app metadata and resolved config."""
    return {
        "app": app_metadata(),
        "config": to_plain(run_config),
        "result": to_plain(result),
    }


def dumps_report(result: Mapping[str, Any], run_config: Mapping[str, Any]) -> str:
    """Get a report as JSON text."""
    return json.dumps(build_report(result, run_config), sort_keys=True, indent=2) + "\n"


def write_json_report(
    path: Path | None, result: Mapping[str, Any], run_config: Mapping[str, Any]
) -> str:
    """Write a JSON report to path, if given, and return its text."""
    text = dumps_report(result, run_config)
    if path is not None:
        logging.info(f"Writing JSON report to {path}")
        path.write_text(text)
    return text


def _metadata(path: Path, run_config: Mapping[str, Any]) -> dict[str, Any]:
    return {
        "encoding": "utf-8",
        "name": path.name,
        "system": {"app": app_metadata()},
        "config": to_plain(run_config),
    }


def write_csv_report(
    path: Path,
    header: Sequence[str],
    rows: Iterable[Sequence[Any]],
    run_config: Mapping[str, Any],
) -> None:
    """Write rows to a CSV file whose YAML header holds the app metadata and config.

    Args:
        path: The file to write
        header: The column names
        rows: The rows, in order
        run_config: The resolved run configuration
    """
    logging.info(f"Writing CSV report to {path}")
    writer = Writer(path, _metadata(path, run_config))
    try:
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
    finally:
        writer.close()
