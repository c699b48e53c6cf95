"""
Shared pytest fixtures for the forecasting applications.

Series fixtures are built in code so tests do not depend on the working
directory; the bundled CSV is checked against them separately.
"""

import numpy as np
import pytest
import structlog

from applications.timeseries_data.sample import build_sample_series
from applications.timeseries_data.schemas import TimeSeries
from shared.months import YearMonth


@pytest.fixture(autouse=True, scope="session")
def quiet_logging():
    """Keep structlog output out of captured stdout."""
    structlog.configure(wrapper_class=structlog.make_filtering_bound_logger(40))
    yield
    structlog.reset_defaults()


# ========================================================================
# SERIES FIXTURES
# ========================================================================


@pytest.fixture
def sample_series() -> TimeSeries:
    """60 months, 2011-01 .. 2015-12 (the bundled sample dataset)."""
    return build_sample_series()


@pytest.fixture
def seasonal_series():
    """Factory for a smooth positive seasonal series of a given length."""

    def _make(length: int, start: YearMonth | None = None) -> TimeSeries:
        start = start or YearMonth(year=2011, month=1)
        months = np.arange(length)
        values = 35.6 + 0.7 * np.sin(2 * np.pi * months / 12) + 0.01 * months
        return TimeSeries.from_values(start, np.round(values, 4))

    return _make


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240601)
