"""Service layer for timeseries_data.

Ingests monthly consumption CSV, fits and applies min-max scaling, and
builds sliding-window supervised samples and train/test splits. Every
operation is pure.
"""

from pathlib import Path

import numpy as np
import pandas as pd
import structlog

from shared.exceptions import (
    DataFileError,
    DegenerateRangeError,
    DuplicateMonthError,
    InsufficientHistoryError,
    InvalidValueError,
    SeriesGapError,
    SeriesParseError,
    SplitBoundaryError,
)
from shared.months import YearMonth

from .schemas import NormalizationParams, SeriesPoint, TimeSeries, WindowedDataset

logger = structlog.get_logger(__name__)

CSV_HEADER = "month,value"
_MONTH_RE = r"(?!0000)\d{4}-(0[1-9]|1[0-2])"
_NAN_SPELLINGS = {"nan", "+nan", "-nan"}


# ------------------------------------------------------------------
# Parsing helpers
# ------------------------------------------------------------------


def _collect_rows(text: str) -> pd.DataFrame:
    """Split the document into (line, month, value) rows.

    ``#`` comment lines and blank lines are skipped; line numbers refer to
    the original document.
    """
    header_seen = False
    records: list[tuple[int, str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if not header_seen:
            if stripped.replace(" ", "") != CSV_HEADER:
                raise SeriesParseError(f"expected header {CSV_HEADER!r}, got {stripped!r}", line=lineno)
            header_seen = True
            continue
        fields = stripped.split(",")
        if len(fields) != 2:
            raise SeriesParseError(f"expected 2 fields, got {len(fields)}: {stripped!r}", line=lineno)
        records.append((lineno, fields[0].strip(), fields[1].strip()))

    if not header_seen:
        raise SeriesParseError(f"missing header {CSV_HEADER!r}")
    return pd.DataFrame.from_records(records, columns=["line", "month", "value"])


def _parse_decimal(text: str) -> float | None:
    # exact shortest-repr parsing keeps the CSV round trip bit-identical
    try:
        return float(text)
    except ValueError:
        return None


class SeriesService:
    """Ingestion, serialisation and month arithmetic on whole series."""

    @staticmethod
    def parse_series_csv(text: str) -> TimeSeries:
        """Parse a ``month,value`` document into a :class:`TimeSeries`.

        Rows may arrive in any order; the result is sorted by month.

        Raises:
            SeriesParseError: bad header, bad field count, bad month or number (names the line).
            InvalidValueError: non-positive or non-finite value.
            DuplicateMonthError: a month appears twice.
            SeriesGapError: a calendar month is missing between two rows.
        """
        frame = _collect_rows(text)
        if len(frame) < 2:
            raise SeriesParseError(f"series needs at least 2 months, got {len(frame)}")

        bad_month = ~frame["month"].str.fullmatch(_MONTH_RE)
        if bad_month.any():
            row = frame[bad_month].iloc[0]
            raise SeriesParseError(f"month must be YYYY-MM, got {row['month']!r}", line=int(row["line"]))

        parsed = frame["value"].map(_parse_decimal)
        unparsed = parsed.isna() & ~frame["value"].str.lower().isin(_NAN_SPELLINGS)
        if unparsed.any():
            row = frame[unparsed].iloc[0]
            raise SeriesParseError(f"value is not a decimal number: {row['value']!r}", line=int(row["line"]))
        frame["number"] = parsed.astype(float)

        invalid = ~np.isfinite(frame["number"]) | (frame["number"] <= 0)
        if invalid.any():
            row = frame[invalid].iloc[0]
            raise InvalidValueError(
                f"line {int(row['line'])}: value must be finite and > 0, got {row['value']!r}",
                data={"line": int(row["line"])},
            )

        frame["index"] = frame["month"].str.slice(0, 4).astype(int) * 12 + frame["month"].str.slice(5, 7).astype(int) - 1
        frame = frame.sort_values(["index", "line"], kind="stable").reset_index(drop=True)

        duplicated = frame["index"].duplicated(keep="first")
        if duplicated.any():
            row = frame[duplicated].iloc[0]
            raise DuplicateMonthError(YearMonth.parse(row["month"]), line=int(row["line"]))

        steps = frame["index"].diff().fillna(1)
        gaps = steps > 1
        if gaps.any():
            position = int(np.flatnonzero(gaps.to_numpy())[0])
            missing = YearMonth.from_index(int(frame["index"].iloc[position - 1]) + 1)
            raise SeriesGapError(missing, line=int(frame["line"].iloc[position]))

        return TimeSeries(
            points=tuple(
                SeriesPoint(month=YearMonth.from_index(int(idx)), value=float(number))
                for idx, number in zip(frame["index"], frame["number"], strict=True)
            )
        )

    @staticmethod
    def load_series(path: Path) -> TimeSeries:
        """Read and parse a series file.

        Raises:
            DataFileError: the path does not name a readable file.
        """
        path = Path(path)
        if not path.is_file():
            raise DataFileError(path)
        try:
            text = path.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            raise DataFileError(path, reason=str(exc)) from exc

        series = SeriesService.parse_series_csv(text)
        logger.info("series_loaded", path=str(path), rows=len(series), first=str(series.start), last=str(series.end))
        return series

    @staticmethod
    def series_to_csv(series: TimeSeries) -> str:
        """Canonical serialisation: header, then ``YYYY-MM,<shortest float repr>`` rows."""
        frame = pd.DataFrame(
            {
                "month": [str(p.month) for p in series.points],
                "value": [repr(float(p.value)) for p in series.points],
            }
        )
        return frame.to_csv(index=False, lineterminator="\n")

    @staticmethod
    def split_train_test(series: TimeSeries, boundary: YearMonth) -> tuple[TimeSeries, TimeSeries]:
        """Split into months before ``boundary`` and months from ``boundary`` on.

        Raises:
            SplitBoundaryError: either part would be empty.
        """
        if boundary <= series.start:
            raise SplitBoundaryError(f"split at {boundary} leaves an empty training part (series starts {series.start})")
        if boundary > series.end:
            raise SplitBoundaryError(f"split at {boundary} leaves an empty test part (series ends {series.end})")

        cut = boundary.index - series.start.index
        return TimeSeries(points=series.points[:cut]), TimeSeries(points=series.points[cut:])

    @staticmethod
    def append_values(series: TimeSeries, values) -> TimeSeries:
        """Extend ``series`` with consecutive months holding ``values``."""
        extra = tuple(SeriesPoint(month=series.end.shift(i + 1), value=float(v)) for i, v in enumerate(values))
        return TimeSeries(points=series.points + extra)


class ScalingService:
    """Min-max scaling and the sliding-window supervised view."""

    @staticmethod
    def fit_normalization(series: TimeSeries) -> NormalizationParams:
        """Min-max bounds of ``series``.

        Raises:
            DegenerateRangeError: every value is equal.
        """
        values = series.values
        low, high = float(values.min()), float(values.max())
        if low == high:
            raise DegenerateRangeError(f"all {len(values)} values equal {low!r}; cannot scale")
        params = NormalizationParams(min=low, max=high)
        logger.debug("normalization_fitted", min=low, max=high, rows=len(values))
        return params

    @staticmethod
    def normalize(value, params: NormalizationParams):
        """Map kWh/t into [0, 1]. Values outside the fitted range map outside [0, 1]."""
        return (value - params.min) / params.span

    @staticmethod
    def denormalize(value, params: NormalizationParams):
        """Exact inverse of :meth:`normalize`."""
        return value * params.span + params.min

    @staticmethod
    def clamp_to_range(value, params: NormalizationParams):
        return np.clip(value, params.min, params.max)

    @staticmethod
    def make_windows(series: TimeSeries, window_len: int, params: NormalizationParams) -> WindowedDataset:
        """Sliding windows of ``window_len`` months predicting the next month.

        Raises:
            InsufficientHistoryError: the series has ``window_len`` or fewer months.
        """
        if window_len < 1:
            raise InsufficientHistoryError(f"window_len must be >= 1, got {window_len}")
        if len(series) <= window_len:
            raise InsufficientHistoryError(
                f"series too short: {len(series)} months cannot fill a window of {window_len} plus a target"
            )

        scaled = ScalingService.normalize(series.values, params)
        frames = np.lib.stride_tricks.sliding_window_view(scaled, window_len + 1)
        months = series.months
        return WindowedDataset(
            window_len=window_len,
            inputs=np.ascontiguousarray(frames[:, :window_len]),
            targets=np.ascontiguousarray(frames[:, window_len:]),
            norm=params,
            target_months=tuple(months[window_len:]),
        )
