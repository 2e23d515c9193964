"""Residual entropy of even-degree regular graphs.

Exact Eulerian-orientation counting, Pauling's estimate, Eulerian-partition sampling,
closed-trail statistics, spectral condition checkers and a switching laboratory.
"""

from euler_entropy.config import APP_VERSION

__version__ = APP_VERSION


def run() -> int:
    """Run the command-line tool."""
    from euler_entropy.cli import main

    return main()
