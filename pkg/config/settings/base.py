"""
Base settings for the forecasting toolkit.

Holds repository paths and the logging setup. Logging goes to stderr so
that command results on stdout stay machine-readable.
"""

import logging.config
from pathlib import Path

import structlog

from .envcommon import CommonEnvSettings

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent.parent

DATA_DIR = BASE_DIR / "data"
SAMPLE_DATA_PATH = DATA_DIR / "sample_consumption.csv"
EXAMPLE_CONFIG_PATH = BASE_DIR / "forecast_config.conf"


def build_logging_dict(level: str) -> dict:
    return {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {
            "plain": {"format": "%(message)s"},
        },
        "handlers": {
            "console": {
                "class": "logging.StreamHandler",
                "stream": "ext://sys.stderr",
                "formatter": "plain",
            },
        },
        "root": {
            "handlers": ["console"],
            "level": level,
        },
    }


def configure_logging(level: str | None = None, fmt: str | None = None) -> None:
    """Configure stdlib logging and structlog.

    Arguments left as ``None`` fall back to ``LOG_LEVEL`` / ``LOG_FORMAT``.
    """
    env = CommonEnvSettings()
    level = (level or env.LOG_LEVEL).upper()
    fmt = fmt or env.LOG_FORMAT

    logging.config.dictConfig(build_logging_dict(level))

    renderer = structlog.processors.JSONRenderer() if fmt == "json" else structlog.dev.ConsoleRenderer(colors=False)
    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.stdlib.add_log_level,
            structlog.stdlib.add_logger_name,
            renderer,
        ],
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=False,
    )
