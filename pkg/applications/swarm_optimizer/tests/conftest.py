"""Fixtures for swarm_optimizer tests."""

import numpy as np
import pytest

from applications.swarm_optimizer.schemas import InertiaMode, PSOConfig, Swarm, Variant
from applications.swarm_optimizer.services import pso_iteration, run_optimizer, swarm_init


class Sphere:
    """sum(z^2): the convex benchmark with its optimum at the origin."""

    def __init__(self, dimension: int):
        self.dimension = dimension

    def __call__(self, position: np.ndarray) -> float:
        return float(np.dot(position, position))


class Constant:
    def __init__(self, dimension: int, value: float):
        self.dimension = dimension
        self.value = value

    def __call__(self, position: np.ndarray) -> float:
        return self.value


# Clerc-Kennedy constriction-equivalent coefficients; converge reliably on the sphere.
STABLE_COEFFICIENTS = {
    "c1": 1.49618,
    "c2": 1.49618,
    "omega_const": 0.7298,
    "inertia_mode": InertiaMode.CONSTANT,
}


@pytest.fixture
def sphere2() -> Sphere:
    return Sphere(2)


@pytest.fixture
def small_config() -> PSOConfig:
    """Ten particles, published coefficients, no early stop."""
    return PSOConfig(swarm_size=10, k_max=100, target_fitness=0.0, seed=3)


def run_checked(objective, config: PSOConfig, variant: Variant) -> Swarm:
    """Sweep a fresh swarm ``config.k_max`` times, asserting the per-sweep invariants.

    After every sweep the global best never rises and equals the best
    personal best, every position is inside the box and every velocity
    component is within the cap. The stepped trace must also match a
    ``run_optimizer`` call with the same config bit for bit.
    """
    swarm = swarm_init(objective, config)
    trace = []
    previous = swarm.global_best_fitness
    for _ in range(config.k_max):
        pso_iteration(swarm, objective, config, variant)
        assert swarm.global_best_fitness <= previous
        assert swarm.global_best_fitness == min(p.personal_best_fitness for p in swarm.particles)
        for particle in swarm.particles:
            assert np.all((particle.position >= config.z_min) & (particle.position <= config.z_max))
            assert np.all(np.abs(particle.velocity) <= config.velocity_cap)
        previous = swarm.global_best_fitness
        trace.append(previous)

    result = run_optimizer(objective, config.model_copy(update={"target_fitness": 0.0}), variant)
    assert result.trace == tuple(trace)
    assert result.best_position.tobytes() == swarm.global_best.tobytes()
    return swarm
