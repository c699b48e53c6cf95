"""Value types for monthly consumption series.

All types are immutable after construction and safe to share between
threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from shared.months import YearMonth


class SeriesPoint(BaseModel):
    """One monthly observation in kWh/t."""

    model_config = ConfigDict(frozen=True)

    month: YearMonth
    value: float


class TimeSeries(BaseModel):
    """Ordered, gap-free monthly observations.

    A parsed input series has at least two months; a part produced by
    :meth:`SeriesService.split_train_test` may hold a single month.
    """

    model_config = ConfigDict(frozen=True)

    points: tuple[SeriesPoint, ...] = Field(min_length=1)

    @model_validator(mode="after")
    def check_invariants(self) -> TimeSeries:
        for point in self.points:
            if not math.isfinite(point.value) or point.value <= 0:
                raise ValueError(f"value at {point.month} must be finite and > 0, got {point.value!r}")
        for prev, cur in zip(self.points, self.points[1:], strict=False):
            if cur.month.index != prev.month.index + 1:
                raise ValueError(f"months must be consecutive: {prev.month} is followed by {cur.month}")
        return self

    @classmethod
    def from_values(cls, start: YearMonth, values) -> TimeSeries:
        return cls(points=tuple(SeriesPoint(month=start.shift(i), value=float(v)) for i, v in enumerate(values)))

    def __len__(self) -> int:
        return len(self.points)

    @property
    def start(self) -> YearMonth:
        return self.points[0].month

    @property
    def end(self) -> YearMonth:
        return self.points[-1].month

    @property
    def months(self) -> list[YearMonth]:
        return [p.month for p in self.points]

    @property
    def values(self) -> np.ndarray:
        return np.array([p.value for p in self.points], dtype=float)

    def value_at(self, month: YearMonth) -> float:
        offset = month.index - self.start.index
        if not 0 <= offset < len(self.points):
            raise KeyError(str(month))
        return self.points[offset].value

    def __contains__(self, month: object) -> bool:
        return isinstance(month, YearMonth) and self.start <= month <= self.end


class NormalizationParams(BaseModel):
    """Min-max scaling bounds in kWh/t."""

    model_config = ConfigDict(frozen=True)

    min: float
    max: float

    @model_validator(mode="after")
    def check_range(self) -> NormalizationParams:
        if not (math.isfinite(self.min) and math.isfinite(self.max)):
            raise ValueError("normalization bounds must be finite")
        if not self.min < self.max:
            raise ValueError(f"normalization requires min < max, got [{self.min}, {self.max}]")
        return self

    @property
    def span(self) -> float:
        return self.max - self.min


@dataclass(frozen=True)
class WindowedDataset:
    """Supervised samples in normalized space.

    ``inputs[i]`` holds series values ``[i, i + window_len)`` and
    ``targets[i]`` the value at ``i + window_len``; rows stay in
    chronological order.
    """

    window_len: int
    inputs: np.ndarray
    targets: np.ndarray
    norm: NormalizationParams
    target_months: tuple[YearMonth, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.inputs.ndim != 2 or self.inputs.shape[1] != self.window_len:
            raise ValueError(f"inputs must have shape (n, {self.window_len}), got {self.inputs.shape}")
        if self.targets.ndim != 2 or self.targets.shape[0] != self.inputs.shape[0]:
            raise ValueError(f"targets must have shape ({self.inputs.shape[0]}, m), got {self.targets.shape}")
        self.inputs.setflags(write=False)
        self.targets.setflags(write=False)

    def __len__(self) -> int:
        return int(self.inputs.shape[0])
