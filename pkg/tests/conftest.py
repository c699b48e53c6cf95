"""
Pytest configuration for repository-level tests.

Covers the settings package: paths, logging setup and run configuration.
"""

import sys
from pathlib import Path

import pytest

# Add project root to Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))


@pytest.fixture
def clean_env(monkeypatch):
    """Drop any SWARM_FORECAST_* and logging variables from the environment."""
    import os

    for name in list(os.environ):
        if name.startswith("SWARM_FORECAST_") or name in {"LOG_LEVEL", "LOG_FORMAT"}:
            monkeypatch.delenv(name)
    return monkeypatch


@pytest.fixture
def write_config(tmp_path):
    """Factory writing a key=value config file and returning its path."""

    def _write(text: str, name: str = "run.conf") -> Path:
        path = tmp_path / name
        path.write_text(text)
        return path

    return _write
