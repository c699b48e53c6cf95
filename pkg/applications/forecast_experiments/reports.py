"""Plain-text tables and CSV exports of reports."""

from collections.abc import Sequence

import pandas as pd

from .schemas import ComparisonReport, ComparisonRow, ForecastPoint, MetricsReport, SpotCheckReport

METRICS_CSV_COLUMNS = ("month", "true", "predicted", "relative_error_pct")
FORECAST_CSV_COLUMNS = ("month", "predicted_kwh_per_t", "clamped")


def _csv(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, lineterminator="\n")


def _table(frame: pd.DataFrame, decimals: dict[str, int]) -> str:
    formatters = {column: (lambda v, d=d: f"{v:.{d}f}") for column, d in decimals.items()}
    return frame.to_string(index=False, formatters=formatters) + "\n"


def metrics_rows_csv(report: MetricsReport) -> str:
    """``month,true,predicted,relative_error_pct`` at full precision."""
    frame = pd.DataFrame(
        [
            (str(row.month), repr(row.true), repr(row.predicted), repr(row.relative_error))
            for row in report.rows
        ],
        columns=list(METRICS_CSV_COLUMNS),
    )
    return _csv(frame)


def forecast_csv(points: Sequence[ForecastPoint]) -> str:
    frame = pd.DataFrame(
        [(str(p.month), repr(p.predicted), repr(p.clamped)) for p in points],
        columns=list(FORECAST_CSV_COLUMNS),
    )
    return _csv(frame)


def render_metrics_table(report: MetricsReport) -> str:
    """Per-month rows, then MSE and the relative-error aggregates."""
    frame = pd.DataFrame(
        {
            "Month": [str(row.month) for row in report.rows],
            "True (kWh/t)": [row.true for row in report.rows],
            "Predicted (kWh/t)": [row.predicted for row in report.rows],
            "Relative error %": [row.relative_error for row in report.rows],
        }
    )
    body = _table(frame, {"True (kWh/t)": 2, "Predicted (kWh/t)": 2, "Relative error %": 3})
    title = f"{report.trainer} one-step predictions\n" if report.trainer else ""
    lines = [
        f"MSE: {report.mse:.4f}",
        f"Average relative error %: {report.average_relative_error:.4f}",
        f"Maximum relative error %: {report.max_relative_error:.4f}",
    ]
    if report.clamp_flag:
        lines.append("Warning: some predictions fall outside the training range")
    return title + body + "\n".join(lines) + "\n"


def _comparison_frame(rows: Sequence[ComparisonRow], *, with_seed: bool) -> pd.DataFrame:
    frame = pd.DataFrame(
        {
            "Model": [r.model for r in rows],
            "Seed": [r.seed for r in rows],
            "Accuracy": [r.target_accuracy for r in rows],
            "Iterations": [r.iterations for r in rows],
            "Refine epochs": [r.refine_epochs for r in rows],
            "Average relative error %": [r.average_relative_error for r in rows],
            "Maximum relative error %": [r.max_relative_error for r in rows],
            "Final fitness": [r.final_fitness for r in rows],
        }
    )
    return frame if with_seed else frame.drop(columns="Seed")


def render_comparison_table(report: ComparisonReport) -> str:
    decimals = {
        "Accuracy": 4,
        "Iterations": 1,
        "Refine epochs": 1,
        "Average relative error %": 4,
        "Maximum relative error %": 4,
        "Final fitness": 6,
    }
    per_seed = _table(_comparison_frame(report.rows, with_seed=True), decimals)
    overall = _table(_comparison_frame(report.aggregate, with_seed=False), decimals)
    seeds = ",".join(str(s) for s in report.seeds)
    return f"Per seed\n{per_seed}\nAggregated over seeds {seeds}\n{overall}"


def render_spot_check_table(report: SpotCheckReport) -> str:
    frame = pd.DataFrame(
        {
            "Month": [str(row.month) for row in report.rows],
            "Original (kWh/t)": [row.original for row in report.rows],
            "Predicted (kWh/t)": [row.predicted for row in report.rows],
            "Accuracy (%)": [row.accuracy for row in report.rows],
        }
    )
    return _table(frame, {"Original (kWh/t)": 2, "Predicted (kWh/t)": 2, "Accuracy (%)": 1})
