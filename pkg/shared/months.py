"""Calendar months as an integer pair with index arithmetic."""

from __future__ import annotations

import re
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, model_serializer, model_validator

_MONTH_PATTERN = re.compile(r"^(\d{4})-(\d{2})$")


class YearMonth(BaseModel):
    """A calendar month. Serialises to and parses from ``YYYY-MM``.

    Arithmetic runs on ``index = year * 12 + (month - 1)``.
    """

    model_config = ConfigDict(frozen=True)

    year: int = Field(ge=1, le=9999)
    month: int = Field(ge=1, le=12)

    @model_validator(mode="before")
    @classmethod
    def _from_text(cls, data: Any) -> Any:
        if isinstance(data, str):
            match = _MONTH_PATTERN.match(data.strip())
            if match is None:
                raise ValueError(f"expected YYYY-MM, got {data!r}")
            return {"year": int(match.group(1)), "month": int(match.group(2))}
        return data

    @model_serializer
    def _to_text(self) -> str:
        return str(self)

    @classmethod
    def parse(cls, text: str) -> YearMonth:
        return cls.model_validate(text)

    @classmethod
    def from_index(cls, index: int) -> YearMonth:
        return cls(year=index // 12, month=index % 12 + 1)

    @property
    def index(self) -> int:
        return self.year * 12 + (self.month - 1)

    def shift(self, months: int) -> YearMonth:
        return YearMonth.from_index(self.index + months)

    def next(self) -> YearMonth:
        return self.shift(1)

    def __str__(self) -> str:
        return f"{self.year:04d}-{self.month:02d}"

    def __repr__(self) -> str:
        return f"YearMonth({self})"

    def __lt__(self, other: YearMonth) -> bool:
        return self.index < other.index

    def __le__(self, other: YearMonth) -> bool:
        return self.index <= other.index

    def __gt__(self, other: YearMonth) -> bool:
        return self.index > other.index

    def __ge__(self, other: YearMonth) -> bool:
        return self.index >= other.index

    def __hash__(self) -> int:
        return hash(self.index)
