"""
Runner Entry Point.

This module serves as the entry point when running campaigns via `python -m runner`.
It is equivalent to the `netee` console script.
"""

from runner.cli import main


if __name__ == "__main__":
    main()
