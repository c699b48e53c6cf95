#!/usr/bin/env python
"""Command-line utility for training and applying forecasting models."""

import sys


def main():
    """Run a forecasting subcommand."""
    try:
        from applications.cli.main import main as run_command
    except ImportError as exc:
        raise ImportError(
            "Couldn't import the forecasting toolkit's dependencies. Are they "
            "installed and available on your PYTHONPATH environment variable? "
            "Did you forget to activate a virtual environment?"
        ) from exc
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
