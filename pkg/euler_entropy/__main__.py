"""The main entry point to euler-entropy."""

import sys

from euler_entropy import run

if __name__ == "__main__":
    sys.exit(run())
