"""Types for training runs, evaluation reports and forecasts."""

from __future__ import annotations

from dataclasses import dataclass
from enum import StrEnum

from pydantic import BaseModel, ConfigDict, Field, model_validator

from applications.neural_net.schemas import BPConfig, NetworkParams, Topology
from applications.swarm_optimizer.schemas import PSOConfig, Variant
from applications.timeseries_data.schemas import NormalizationParams
from shared.months import YearMonth


class Trainer(StrEnum):
    """Report names of the trainers."""

    BP = "BP"
    PSO = "PSO"
    PSO_BP = "PSO-BP"
    MPSO_BP = "MPSO-BP"

    @classmethod
    def from_flag(cls, flag: str) -> Trainer:
        """``bp``, ``pso``, ``pso-bp`` or ``mpso-bp`` (any case)."""
        for trainer in cls:
            if trainer.value.lower() == flag.strip().lower():
                return trainer
        raise ValueError(f"unknown trainer {flag!r}")

    @property
    def flag(self) -> str:
        return self.value.lower()

    @property
    def variant(self) -> Variant | None:
        return _VARIANTS.get(self)


_VARIANTS = {
    Trainer.PSO: Variant.VANILLA,
    Trainer.PSO_BP: Variant.INERTIA,
    Trainer.MPSO_BP: Variant.MPSO,
}

# Trainers compared side by side, in report order.
COMPARED_TRAINERS = (Trainer.BP, Trainer.PSO_BP, Trainer.MPSO_BP)


class HybridConfig(BaseModel):
    """Swarm search followed by gradient fine-tuning from the best particle.

    Fine-tuning applies to PSO-BP and MPSO-BP only; the plain PSO trainer is
    always swarm-only. Its epochs are capped by ``bp.max_epochs`` and counted
    apart from the swarm sweeps.
    """

    model_config = ConfigDict(frozen=True)

    swarm: PSOConfig = Field(default_factory=PSOConfig)
    bp: BPConfig = Field(default_factory=BPConfig)
    bp_refine: bool = True


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    topology: Topology
    window_len: int = Field(ge=1)
    hybrid: HybridConfig = Field(default_factory=HybridConfig)

    @model_validator(mode="after")
    def check_window(self) -> ExperimentConfig:
        if self.topology.input_len != self.window_len:
            raise ValueError(
                f"topology input width {self.topology.input_len} must equal window_len {self.window_len}"
            )
        return self


@dataclass(frozen=True)
class TrainedModel:
    """Network weights plus everything needed to forecast in kWh/t.

    ``final_fitness`` is the training-set MSE of ``params`` in normalized
    space. ``iterations_used`` counts swarm sweeps for swarm trainers and
    epochs for BP; fine-tuning epochs after a swarm go to ``refine_epochs``.
    """

    topology: Topology
    params: NetworkParams
    normalization: NormalizationParams
    window_len: int
    trainer: Trainer
    iterations_used: int
    final_fitness: float
    seed: int
    refine_epochs: int = 0

    @property
    def total_iterations(self) -> int:
        """Swarm sweeps (or BP epochs) plus fine-tuning epochs."""
        return self.iterations_used + self.refine_epochs


@dataclass(frozen=True)
class TrainingOutcome:
    model: TrainedModel
    # swarm global best per sweep, or loss per epoch for BP
    trace: tuple[float, ...]
    target: float
    refine_trace: tuple[float, ...] = ()

    @property
    def reached_target(self) -> bool:
        return self.model.final_fitness <= self.target


class MetricsRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    month: YearMonth
    true: float
    predicted: float
    relative_error: float = Field(description="100 * (true - predicted) / true")


class MetricsReport(BaseModel):
    """Per-month one-step predictions over a test range and their aggregates."""

    model_config = ConfigDict(frozen=True)

    trainer: str | None = None
    rows: tuple[MetricsRow, ...]
    mse: float
    average_relative_error: float
    max_relative_error: float
    clamp_flag: bool = False


class ComparisonRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    model: str
    seed: int | None = Field(default=None, description="None on seed-aggregated rows")
    target_accuracy: float
    iterations: float = Field(description="Sweeps or epochs, fine-tuning epochs included")
    refine_epochs: float = 0.0
    average_relative_error: float
    max_relative_error: float
    final_fitness: float
    reached_target: bool


class ComparisonReport(BaseModel):
    """Per-seed rows (seed order, then trainer order) and one aggregate row per trainer."""

    model_config = ConfigDict(frozen=True)

    seeds: tuple[int, ...]
    rows: tuple[ComparisonRow, ...]
    aggregate: tuple[ComparisonRow, ...]


class SpotCheckRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    month: YearMonth
    original: float
    predicted: float
    accuracy: float


class SpotCheckReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    rows: tuple[SpotCheckRow, ...]


class ForecastPoint(BaseModel):
    """One horizon month. ``clamped`` is ``predicted`` limited to the training range."""

    model_config = ConfigDict(frozen=True)

    month: YearMonth
    predicted: float
    clamped: float
    out_of_range: bool
