"""Error hierarchy for the forecasting toolkit.

Every failure the toolkit reports on purpose is a ``ForecastError``. Each
carries a machine-readable ``code`` and the process ``exit_status`` the
command line should end with. The CLI middleware catches them and turns
them into a one-line message.

Examples:
    raise SeriesGapError(missing=YearMonth(year=2011, month=2))
    raise DivergenceError(epoch=412, loss=float("nan"))
"""

from typing import Any


class ForecastError(Exception):
    """Base class for expected toolkit failures.

    Args:
        message: Human-readable error message
        code: Error code identifier (defaults to the class ``code``)
        data: Additional structured context (optional)
    """

    code: str = "forecast_error"
    exit_status: int = 1

    def __init__(self, message: str, *, code: str | None = None, data: dict[str, Any] | None = None):
        self.message = message
        if code is not None:
            self.code = code
        self.data = data or {}
        super().__init__(message)


class ValidationFailure(ForecastError):
    """Bad input: data, configuration or preconditions. Exit status 1."""

    code = "validation_error"
    exit_status = 1


class NumericFailure(ForecastError):
    """Training or optimisation produced non-finite numbers. Exit status 2."""

    code = "numeric_failure"
    exit_status = 2


# ----------------------------------------------------------------------
# Validation failures
# ----------------------------------------------------------------------


class SeriesParseError(ValidationFailure):
    code = "malformed_row"

    def __init__(self, message: str, *, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}", data={"line": line})


class SeriesGapError(ValidationFailure):
    code = "month_gap"

    def __init__(self, missing, *, line: int | None = None):
        self.missing = missing
        self.line = line
        where = f" (before line {line})" if line is not None else ""
        super().__init__(f"gap in months: {missing} is missing{where}", data={"missing": str(missing), "line": line})


class DuplicateMonthError(ValidationFailure):
    code = "duplicate_month"

    def __init__(self, month, *, line: int | None = None):
        self.month = month
        self.line = line
        super().__init__(f"line {line}: duplicate month {month}", data={"month": str(month), "line": line})


class InvalidValueError(ValidationFailure):
    code = "invalid_value"


class DegenerateRangeError(ValidationFailure):
    code = "degenerate_range"


class InsufficientHistoryError(ValidationFailure):
    code = "insufficient_history"


class ShapeMismatchError(ValidationFailure):
    code = "shape_mismatch"


class SplitBoundaryError(ValidationFailure):
    code = "split_out_of_range"


class ConfigError(ValidationFailure):
    code = "config_error"


class DataFileError(ValidationFailure):
    code = "data_file_error"

    def __init__(self, path, reason: str = "file not found"):
        self.path = path
        super().__init__(f"{path}: {reason}", data={"path": str(path)})


class ModelFileError(ValidationFailure):
    code = "model_file_error"


# ----------------------------------------------------------------------
# Numeric failures
# ----------------------------------------------------------------------


class NonFiniteFitnessError(NumericFailure):
    code = "non_finite_fitness"

    def __init__(self, *, particle: int, sub_step: int | None = None, iteration: int | None = None, value: float | None = None):
        self.particle = particle
        self.sub_step = sub_step
        self.iteration = iteration
        step = "unrefined update" if not sub_step else f"sub-step {sub_step}"
        super().__init__(
            f"objective returned {value!r} for particle {particle} at {step} (iteration {iteration})",
            data={"particle": particle, "sub_step": sub_step, "iteration": iteration},
        )


class DivergenceError(NumericFailure):
    code = "training_diverged"

    def __init__(self, *, epoch: int, loss: float):
        self.epoch = epoch
        self.loss = loss
        super().__init__(f"training diverged at epoch {epoch}: loss {loss!r}", data={"epoch": epoch})
