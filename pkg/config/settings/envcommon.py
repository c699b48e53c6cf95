"""
Environment-specific common settings loaded from environment variables.

This module uses pydantic-settings to load configuration from .env files
and environment variables, providing type validation and defaults.
"""

from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class CommonEnvSettings(BaseSettings):
    """Process-wide settings that are not part of a training run."""

    # Logging
    LOG_LEVEL: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = Field(default="INFO", description="Root log level")
    LOG_FORMAT: Literal["console", "json"] = Field(default="console", description="structlog renderer")

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )
