"""The bundled sample dataset (2011-01 .. 2015-12).

The original monthly history is unpublished. Nine monthly values are
published; every other month is SYNTHETIC:

    value(year, month) = round(SEASONAL_PROFILE[month] + YEAR_OFFSET[year], 2)

The profile was chosen so that the generator reproduces each published
value except 2015-04, which is kept as published.
"""

from shared.months import YearMonth

from .schemas import TimeSeries

SAMPLE_START = YearMonth(year=2011, month=1)
SAMPLE_END = YearMonth(year=2015, month=12)

SEASONAL_PROFILE: dict[int, float] = {
    1: 36.82,
    2: 36.87,
    3: 36.84,
    4: 36.30,
    5: 35.90,
    6: 35.55,
    7: 35.38,
    8: 36.27,
    9: 35.80,
    10: 36.10,
    11: 36.63,
    12: 34.26,
}

YEAR_OFFSET: dict[int, float] = {
    2011: -0.05,
    2012: 0.04,
    2013: -0.03,
    2014: 0.06,
    2015: 0.00,
}

# kWh/t, as published
PUBLISHED_VALUES: dict[str, float] = {
    "2011-08": 36.22,
    "2012-11": 36.67,
    "2013-12": 34.23,
    "2014-04": 36.36,
    "2015-01": 36.82,
    "2015-02": 36.87,
    "2015-03": 36.84,
    "2015-04": 35.16,
    "2015-07": 35.38,
}


def synthetic_monthly_value(month: YearMonth) -> float:
    return round(SEASONAL_PROFILE[month.month] + YEAR_OFFSET[month.year], 2)


def build_sample_series() -> TimeSeries:
    """The sample series: published values where known, the generator elsewhere."""
    count = SAMPLE_END.index - SAMPLE_START.index + 1
    values = []
    for offset in range(count):
        month = SAMPLE_START.shift(offset)
        values.append(PUBLISHED_VALUES.get(str(month), synthetic_monthly_value(month)))
    return TimeSeries.from_values(SAMPLE_START, values)
