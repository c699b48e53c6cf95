"""Flat run configuration.

Values are layered: command-line flags, then a ``key=value`` config file,
then ``SWARM_FORECAST_*`` environment variables, then the built-in defaults
(the published hyperparameters: sigma=0.8, omega0=0.9, omega=0.7, c1=2,
c2=2.4, alpha=0.07, eta=0.80, M=50, 1000 iterations, accuracy 0.005).
"""

from pathlib import Path
from typing import Any

from pydantic import Field, ValidationError, field_validator
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict

from applications.swarm_optimizer.schemas import InertiaMode
from shared.exceptions import ConfigError, DataFileError
from shared.months import YearMonth


def parse_config_lines(text: str) -> dict[str, str]:
    """Parse ``key=value`` lines. ``#`` starts a comment; blank lines are skipped.

    Raises:
        ConfigError: malformed line, empty key or repeated key (names the line).
    """
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in values:
            raise ConfigError(f"line {lineno}: key {key!r} given twice")
        values[key] = value
    return values


class RunSettings(BaseSettings):
    """Every tunable of a training run, as one flat namespace."""

    # data
    window_len: int = Field(default=12, ge=1)
    hidden_len: int = Field(default=6, ge=1)
    split: str | None = Field(default=None, description="First test month, YYYY-MM")

    # swarm
    swarm_size: int = Field(default=50, ge=2)
    c1: float = Field(default=2.0, ge=0)
    c2: float = Field(default=2.4, ge=0)
    sigma: float = Field(default=0.8, gt=0)
    omega0: float = Field(default=0.9, gt=0)
    omega_const: float = Field(default=0.7, gt=0)
    inertia_mode: InertiaMode = InertiaMode.SCHEDULE
    j: int = Field(default=3, ge=1)
    k_max: int = Field(default=1000, ge=1)
    target_fitness: float = Field(default=0.005, ge=0)
    z_min: float = -5.0
    z_max: float = 5.0
    n_i1: float | None = Field(default=None, gt=0)
    n_i2: float | None = Field(default=None, gt=0)
    workers: int = Field(default=1, ge=1)

    # gradient training
    learning_rate: float = Field(default=0.07, gt=0)
    momentum: float = Field(default=0.8, ge=0, lt=1)
    max_epochs: int = Field(default=5000, ge=0)
    target_loss: float = Field(default=0.005, gt=0)
    init_range: float = Field(default=0.5, gt=0)
    bp_refine: bool = True

    seed: int = Field(default=0, ge=0)

    model_config = SettingsConfigDict(
        env_prefix="SWARM_FORECAST_",
        extra="forbid",
        frozen=True,
    )

    @field_validator("split")
    @classmethod
    def validate_split(cls, v: str | None) -> str | None:
        if v is None:
            return v
        return str(YearMonth.parse(v))

    @property
    def split_month(self) -> YearMonth | None:
        return YearMonth.parse(self.split) if self.split else None

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        # file values and flags both arrive as init kwargs
        return (init_settings, env_settings)

    @classmethod
    def load(cls, config_file: Path | None = None, **overrides: Any) -> "RunSettings":
        """Resolve settings from an optional config file plus explicit overrides.

        ``None`` overrides are ignored so unset CLI flags fall through.

        Raises:
            DataFileError: config file missing.
            ConfigError: unreadable file, unknown key or a value failing validation.
        """
        file_values: dict[str, str] = {}
        if config_file is not None:
            if not config_file.is_file():
                raise DataFileError(config_file)
            try:
                text = config_file.read_text(encoding="utf-8")
            except (OSError, UnicodeDecodeError) as exc:
                raise ConfigError(f"{config_file}: unreadable config file ({exc})") from exc
            file_values = parse_config_lines(text)
            unknown = sorted(set(file_values) - set(cls.model_fields))
            if unknown:
                raise ConfigError(f"{config_file}: unknown config key(s): {', '.join(unknown)}")

        values = {**file_values, **{k: v for k, v in overrides.items() if v is not None}}
        try:
            return cls(**values)
        except ValidationError as exc:
            problems = "; ".join(f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in exc.errors())
            raise ConfigError(f"invalid configuration: {problems}") from exc
