"""Types for the bounded particle swarm optimizer."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import StrEnum
from typing import Protocol, runtime_checkable

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

VELOCITY_CAP_FRACTION = 0.5
VELOCITY_FLOOR_FRACTION = 0.01


class Variant(StrEnum):
    """Which update rule a sweep applies."""

    VANILLA = "vanilla"
    INERTIA = "inertia"
    MPSO = "mpso"


class InertiaMode(StrEnum):
    SCHEDULE = "schedule"
    CONSTANT = "constant"


class PSOConfig(BaseModel):
    """Swarm settings.

    ``n_i1`` (velocity cap) and ``n_i2`` (velocity floor) default to 0.5 and
    0.01 of the search box width. Initial velocities are uniform in
    ``[-n_i1, n_i1]``; a cap wider than the box (``math.inf`` included) draws
    them from ``[-width, width]`` instead. ``omega0`` is the ceiling of the sigmoid
    inertia schedule; ``omega_const`` replaces it when ``inertia_mode`` is
    ``constant``.
    """

    model_config = ConfigDict(frozen=True)

    swarm_size: int = Field(default=50, ge=2)
    c1: float = Field(default=2.0, ge=0)
    c2: float = Field(default=2.4, ge=0)
    sigma: float = Field(default=0.8, gt=0)
    omega0: float = Field(default=0.9, gt=0)
    omega_const: float = Field(default=0.7, ge=0)
    inertia_mode: InertiaMode = InertiaMode.SCHEDULE
    j: int = Field(default=3, ge=1, description="Refinement sub-steps per particle")
    k_max: int = Field(default=1000, ge=1)
    target_fitness: float = Field(default=0.005, ge=0)
    z_min: float = -5.0
    z_max: float = 5.0
    n_i1: float | None = Field(default=None, gt=0)
    n_i2: float | None = Field(default=None, gt=0)
    workers: int = Field(default=1, ge=1)
    seed: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def check_bounds(self) -> PSOConfig:
        if not (np.isfinite(self.z_min) and np.isfinite(self.z_max)) or self.z_min >= self.z_max:
            raise ValueError(f"z_min must be below z_max, got [{self.z_min}, {self.z_max}]")
        if not self.velocity_floor < self.velocity_cap:
            raise ValueError(f"n_i2 ({self.velocity_floor}) must be below n_i1 ({self.velocity_cap})")
        return self

    @property
    def width(self) -> float:
        return self.z_max - self.z_min

    @property
    def velocity_cap(self) -> float:
        """N_i1: per-dimension speed limit and the high-speed threshold."""
        return self.n_i1 if self.n_i1 is not None else VELOCITY_CAP_FRACTION * self.width

    @property
    def velocity_floor(self) -> float:
        """N_i2: below this a dimension counts as low-speed."""
        return self.n_i2 if self.n_i2 is not None else VELOCITY_FLOOR_FRACTION * self.width


@runtime_checkable
class Objective(Protocol):
    """Pure, thread-safe fitness of a position vector. Lower is better."""

    dimension: int

    def __call__(self, position: np.ndarray) -> float: ...


@dataclass
class Particle:
    position: np.ndarray
    velocity: np.ndarray
    personal_best: np.ndarray
    personal_best_fitness: float
    fitness: float
    # pre-refinement position and velocity of the current iteration
    base_position: np.ndarray
    base_velocity: np.ndarray


@dataclass
class Swarm:
    """Optimizer state. Owned by a single writer between evaluation phases."""

    particles: list[Particle]
    global_best: np.ndarray
    global_best_fitness: float
    rng: np.random.Generator = field(repr=False)
    iteration: int = 0

    @property
    def dimension(self) -> int:
        return self.global_best.size

    def __len__(self) -> int:
        return len(self.particles)


@dataclass(frozen=True)
class OptimizerResult:
    best_position: np.ndarray
    best_fitness: float
    trace: tuple[float, ...]
    iterations_used: int
