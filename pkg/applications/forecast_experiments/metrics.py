"""Forecast error metrics in kWh/t and percent."""

from collections.abc import Sequence

import numpy as np

from shared.exceptions import InvalidValueError

from .schemas import MetricsReport, MetricsRow


def _check_true(true_v: float) -> None:
    if not true_v > 0:
        raise InvalidValueError(f"true value must be > 0, got {true_v!r}")


def relative_error(true_v: float, pred: float) -> float:
    """100 * (true - pred) / true. Positive when the model under-predicts."""
    _check_true(true_v)
    return 100.0 * (true_v - pred) / true_v


def accuracy_percent(true_v: float, pred: float) -> float:
    """100 * (1 - |true - pred| / true)."""
    _check_true(true_v)
    return 100.0 * (1.0 - abs(true_v - pred) / true_v)


def build_metrics_report(
    rows: Sequence[MetricsRow],
    *,
    clamp_flag: bool = False,
    trainer: str | None = None,
) -> MetricsReport:
    """Aggregate rows: MSE in kWh/t, mean and max of |relative error|."""
    if not rows:
        raise InvalidValueError("cannot aggregate an empty set of predictions")
    rows = tuple(sorted(rows, key=lambda row: row.month))
    residuals = np.array([row.true - row.predicted for row in rows])
    magnitudes = np.abs([row.relative_error for row in rows])
    return MetricsReport(
        trainer=trainer,
        rows=rows,
        mse=float(np.mean(residuals**2)),
        average_relative_error=float(np.mean(magnitudes)),
        max_relative_error=float(np.max(magnitudes)),
        clamp_flag=clamp_flag,
    )
