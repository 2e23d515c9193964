"""The RunConfig dataclass and loading of run-configuration files."""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any

import yaml
from schema import And, Const, Optional, Or, Schema, SchemaError

from euler_entropy import config
from euler_entropy.errors import RunConfigError

CURRENT_RUN_CONFIG_VERSION = 1
"""The current version of the run-configuration schema."""

COMMANDS = (
    "gen",
    "eo",
    "pauling",
    "mc",
    "trails",
    "spectrum",
    "check-theorem",
    "check-spectral",
    "check-girth",
    "check-product",
    "switchlab",
    "identity",
    "xlaw",
)
"""The subcommands of the tool."""

FORMATS = ("json", "csv")
"""The report formats."""


def _positive(x: Any) -> bool:
    return x > 0


_number = Or(int, float)

_run_config_schema = Schema(
    {
        "version": Const(
            CURRENT_RUN_CONFIG_VERSION,
            f"Version number must be {CURRENT_RUN_CONFIG_VERSION}",
        ),
        Optional("command"): Or(*COMMANDS),
        Optional("graph"): str,
        Optional("seed"): And(int, lambda s: s >= 0),
        Optional("samples"): And(int, _positive),
        Optional("lmax"): And(int, lambda x: x >= 3),
        Optional("k"): And(int, _positive),
        Optional("L"): And(int, _positive),
        Optional("C"): And(_number, _positive),
        Optional("delta"): And(_number, lambda x: 0 < x < 1),
        Optional("M"): And(_number, lambda x: x >= 0),
        Optional("output"): str,
        Optional("format"): Or(*FORMATS),
        Optional("threads"): And(int, _positive),
        Optional("max_edges"): And(int, _positive),
        Optional("h"): And([And(int, _positive)], len),
        Optional("d"): And(int, _positive),
    }
)
"""Schema for validating run-configuration files."""


@dataclass(frozen=True)
class RunConfig:
    """The fully resolved settings for one run of the tool."""

    command: str
    graph: str | None = None
    """An edge-list path or a generator DSL string."""
    seed: int = config.DEFAULT_SEED
    samples: int = 10_000
    lmax: int = 8
    k: int | None = None
    L: int | None = None
    C: float = 1.0
    delta: float = 0.5
    M: float | None = None
    output: str | None = None
    format: str | None = None
    """json or csv; gen writes an edge list when this is unset."""
    threads: int = 1
    max_edges: int | None = None
    h: tuple[int, ...] | None = None
    """Factor degrees for check-product."""
    d: int | None = None
    """Degree for pauling and xlaw."""

    def __post_init__(self) -> None:
        """Check that the settings fit together.

        Raises:
            RunConfigError: The command is unknown or flags conflict
        """
        if self.command not in COMMANDS:
            raise RunConfigError(f"Unknown command: {self.command!r}")
        if self.format is not None and self.format not in FORMATS:
            raise RunConfigError(f"Unknown format: {self.format!r}")
        if self.format == "csv" and self.output is None:
            raise RunConfigError("CSV reports need an output path (--output)")
        if self.threads < 1:
            raise RunConfigError(f"threads must be at least 1: {self.threads}")
        if self.h is not None and self.graph is not None:
            raise RunConfigError("Give either factor degrees or a graph, not both")

    @property
    def report_format(self) -> str:
        """The format of the report, defaulting to JSON."""
        return self.format or "json"

    @property
    def output_path(self) -> Path | None:
        """The path to write the report to, if any."""
        return None if self.output is None else Path(self.output)

    def as_dict(self) -> dict[str, Any]:
        """Get the settings as plain data, for embedding in reports."""
        out = asdict(self)
        if self.h is not None:
            out["h"] = list(self.h)
        return out


def load_run_config_file(file_path: Path) -> dict[str, Any]:
    """Load and validate a run-configuration file.

    Raises:
        RunConfigError: The file cannot be parsed or does not match the schema
    """
    logging.info(f"Loading run config from {file_path}")
    try:
        with file_path.open() as file:
            plain_data = yaml.safe_load(file)
        _run_config_schema.validate(plain_data)
    except (OSError, yaml.YAMLError, SchemaError) as error:
        raise RunConfigError(f"Invalid run config {file_path}: {error!s}") from error

    plain_data.pop("version")
    if "h" in plain_data:
        plain_data["h"] = tuple(plain_data["h"])
    return plain_data


def resolve_run_config(
    overrides: Mapping[str, Any], file_path: Path | None = None
) -> RunConfig:
    """Combine a run-configuration file with command-line values.

    Values given on the command line (those which are not None) take precedence over
    the file, which takes precedence over the defaults.

    Raises:
        RunConfigError: The settings are invalid
    """
    values = load_run_config_file(file_path) if file_path else {}
    values.update({k: v for k, v in overrides.items() if v is not None})
    if "command" not in values:
        raise RunConfigError("No command given")

    names = {f.name for f in fields(RunConfig)}
    if unknown := set(values) - names:
        raise RunConfigError(f"Unknown settings: {sorted(unknown)}")

    return replace(RunConfig(values.pop("command")), **values)
