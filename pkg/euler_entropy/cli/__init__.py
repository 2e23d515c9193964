"""The command-line interface for euler-entropy."""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import NoReturn

from pubsub import pub

from euler_entropy import config
from euler_entropy.budget import progress_topic
from euler_entropy.cli.commands import CommandOutput, run_command
from euler_entropy.cli.errors import EXIT_OK, cli_errors
from euler_entropy.cli.run_config import (
    COMMANDS,
    FORMATS,
    RunConfig,
    resolve_run_config,
)
from euler_entropy.errors import RunConfigError
from euler_entropy.reports import write_csv_report, write_json_report

PROGRESS_KERNELS = ("orientations", "trails", "partitions", "sampling", "paths")
"""The kernels whose progress messages are logged."""


class _ArgumentParser(argparse.ArgumentParser):
    """An ArgumentParser which raises instead of exiting on bad arguments."""

    def error(self, message: str) -> NoReturn:
        raise RunConfigError(message)


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"Expected comma-separated integers: {text}")


def build_parser() -> argparse.ArgumentParser:
    """Create the parser for the command line."""
    parser = _ArgumentParser(
        prog=config.APP_NAME,
        description="Residual entropy of even-degree regular graphs.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", type=Path, help="YAML run-configuration file")
    parser.add_argument("--graph", help="edge-list file or generator DSL string")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--samples", type=int)
    parser.add_argument("--lmax", type=int)
    parser.add_argument("--k", type=int)
    parser.add_argument("--L", type=int)
    parser.add_argument("--C", type=float)
    parser.add_argument("--delta", type=float)
    parser.add_argument("--M", type=float)
    parser.add_argument("--output", help="file to write the report to")
    parser.add_argument("--format", choices=FORMATS)
    parser.add_argument("--threads", type=int)
    parser.add_argument("--max-edges", type=int, dest="max_edges")
    parser.add_argument("--h", type=_int_list, help="factor degrees, e.g. 2,2,2")
    parser.add_argument("--d", type=int, help="vertex degree")
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {config.APP_VERSION}"
    )
    return parser


def _log_progress(done: int, total: int | None = None, topic=pub.AUTO_TOPIC) -> None:
    logging.debug(f"{topic.getName()}: {done}/{total if total else '?'}")


def _subscribe_progress() -> None:
    for kernel in PROGRESS_KERNELS:
        pub.subscribe(_log_progress, progress_topic(kernel))


def write_output(cfg: RunConfig, output: CommandOutput) -> None:
    """Write the output of a command where the config says."""
    path = cfg.output_path
    if output.text is not None:
        if path is None:
            sys.stdout.write(output.text)
        else:
            path.write_text(output.text)
        return

    if cfg.report_format == "csv":
        if output.csv_header is None:
            raise RunConfigError(f"{cfg.command} has no CSV report")
        assert path is not None
        write_csv_report(path, output.csv_header, output.csv_rows, cfg.as_dict())
        return

    text = write_json_report(path, output.result, cfg.as_dict())
    if path is None:
        sys.stdout.write(text)


@cli_errors
def run(argv: Sequence[str] | None = None) -> int:
    """Parse the command line, run the command and write its report."""
    args = vars(build_parser().parse_args(argv))
    config_path = args.pop("config")
    cfg = resolve_run_config(args, config_path)
    write_output(cfg, run_command(cfg))
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    """The entry point of the command-line tool."""
    from euler_entropy.logger import initialise_logging

    args = list(sys.argv[1:] if argv is None else argv)
    command = args[0] if args and args[0] in COMMANDS else None
    initialise_logging(command)
    _subscribe_progress()
    return run(args)
