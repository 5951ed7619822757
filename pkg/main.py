"""Entry point: `python main.py <command> ...` runs the qlw CLI."""

import sys

from scripts.qlw import run

if __name__ == "__main__":
    sys.exit(run(sys.argv[1:]))
