"""Error handling around command execution."""

import sys

import structlog
from pydantic import ValidationError

from shared.exceptions import ForecastError, ValidationFailure

logger = structlog.get_logger(__name__)


class CommandErrorMiddleware:
    """Turn expected failures into a one-line message and an exit status.

    ``ForecastError`` subclasses carry their own code and status; a stray
    pydantic ``ValidationError`` counts as a validation failure. Anything
    else propagates: it is a bug, not bad input.

    Usage:
        status = CommandErrorMiddleware(run_command)(args)
    """

    def __init__(self, get_response):
        self.get_response = get_response

    def __call__(self, *args, **kwargs) -> int:
        try:
            return self.get_response(*args, **kwargs)
        except Exception as exc:
            status = self.process_exception(exc)
            if status is None:
                raise
            return status

    def process_exception(self, exception: Exception) -> int | None:
        """Report ``exception`` and return the exit status, or ``None`` to let it propagate."""
        if isinstance(exception, ForecastError):
            return self._report(exception.code, exception.message, exception.exit_status)

        if isinstance(exception, ValidationError):
            msg = "; ".join(f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in exception.errors())
            return self._report(ValidationFailure.code, msg, ValidationFailure.exit_status)

        return None

    @staticmethod
    def _report(code: str, message: str, status: int) -> int:
        logger.warning("command_failed", code=code, exit_status=status, error=message)
        sys.stderr.write(f"error[{code}]: {message}\n")
        return status
