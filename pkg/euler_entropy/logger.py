"""Logging to the console and to a per-run file in the user log directory."""

import logging
import os
from datetime import datetime
from pathlib import Path

from platformdirs import user_log_path

from euler_entropy import config

LOG_FORMAT = "%(asctime)s [%(levelname)s] (%(threadName)s) %(message)s"
"""Worker threads of the kernels are named in each record."""

log_file: Path


def get_log_path() -> Path:
    """Return the directory euler-entropy writes its logs to, creating it if needed."""
    log_path = user_log_path(config.APP_NAME, config.APP_AUTHOR)
    log_path.mkdir(parents=True, exist_ok=True)
    return log_path


def log_level() -> str:
    """Get the log level named by the environment, INFO by default.

    Raises:
        ValueError: The environment names an unknown level
    """
    level = (os.environ.get(config.LOG_LEVEL_ENV_VAR) or "INFO").upper()
    if not isinstance(logging.getLevelName(level), int):
        raise ValueError(f"Invalid log level in {config.LOG_LEVEL_ENV_VAR}: {level}")
    return level


def initialise_logging(command: str | None = None) -> Path:
    """Send log records to the console and to a new log file.

    Args:
        command: The command being run, which is added to the file name
    Returns:
        The path of the log file
    """
    level = log_level()

    global log_file
    stem = datetime.now().strftime("%Y%m%d_%H-%M-%S")
    if command:
        stem = f"{stem}_{command}"
    log_file = get_log_path() / f"{stem}.log"

    logging.basicConfig(
        level=level,
        format=LOG_FORMAT,
        handlers=[logging.FileHandler(log_file), logging.StreamHandler()],
    )
    logging.debug(f"{config.APP_NAME} {config.APP_VERSION} logging to {log_file}")
    return log_file
