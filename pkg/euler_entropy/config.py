"""Common constants used throughout the package."""

from importlib.metadata import version

APP_NAME = "euler-entropy"
"""A human-readable name for the tool."""

APP_AUTHOR = "Imperial College London"
"""The name of the tool's author (used for the log path)."""

APP_VERSION = version("euler-entropy")
"""The current version of the tool."""

DEFAULT_SEED = 20250601
"""The seed used when none is given.

Reports must be reproducible, so the default is a fixed constant rather than being
drawn from system entropy.
"""

BUDGET_ENV_VAR = "EULER_ENTROPY_BUDGET"
"""Environment variable which, if set, replaces the default enumeration caps."""

LOG_LEVEL_ENV_VAR = "EULER_ENTROPY_LOG_LEVEL"
"""Environment variable for choosing the log level."""

DEFAULT_EO_MAX_EDGES = 34
"""Largest number of edges for which Eulerian orientations are counted exactly."""

DEFAULT_TRAIL_BUDGET = 10**8
"""Maximum number of states visited by the closed-trail search."""

DEFAULT_PARTITION_CAP = 10**7
"""Maximum number of Eulerian partitions that will be enumerated exhaustively."""

DEFAULT_PATH_BUDGET = 10**7
"""Maximum number of path extensions explored when bounding switching paths."""

DEFAULT_REJECTION_ATTEMPTS = 1000
"""Number of pairings tried before giving up on a simple random regular graph."""

DEFAULT_JACOBI_TOL = 1e-10
"""Relative off-diagonal norm at which Jacobi sweeps stop."""

DEFAULT_JACOBI_SWEEPS = 100
"""Maximum number of cyclic Jacobi sweeps."""

MULTIPLICITY_MERGE_TOL = 1e-7
"""Eigenvalues closer than this (times max(1, ||A||_F)) are merged."""

DEFAULT_BOOTSTRAP_RESAMPLES = 2000
"""Number of bootstrap resamples used for confidence intervals."""

BOOTSTRAP_CONFIDENCE = 0.95
"""Coverage of the percentile bootstrap interval."""

MIN_MC_SAMPLES = 100
"""The smallest number of samples accepted by the Monte Carlo estimator."""

MC_CHUNK_SIZE = 4096
"""Number of samples handed to a worker at a time."""

LIEB_WU_SLACK = 1e-12
"""Tolerance below zero allowed for the gap between rho and Pauling's estimate."""

PROGRESS_INTERVAL = 100_000
"""How many budget steps pass between progress messages."""

PROGRESS_TOPIC = "progress"
"""The root topic name for progress messages sent by long-running kernels."""

XI_BRUTEFORCE_MAX_DEGREE = 10
"""Largest degree for which the per-vertex law is checked by brute force."""
