"""Service layer for swarm_optimizer.

Vanilla, inertia-weighted and sub-step-refined (``mpso``) particle swarm
updates over a bounded box, plus the seeded run loop.

Random draws come from the swarm's own generator in a fixed order per
iteration: ``r1`` and ``r2`` for every particle in index order, then (mpso
only) one sign per particle and sub-step. Fitness evaluations may run on a
thread pool; best-position reductions always walk particles in index order,
so results do not depend on ``workers``.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from concurrent.futures import Executor, ThreadPoolExecutor

import numpy as np
import structlog
from scipy.special import expit

from shared.exceptions import NonFiniteFitnessError, ShapeMismatchError
from shared.seeding import get_rng

from .schemas import InertiaMode, Objective, OptimizerResult, Particle, PSOConfig, Swarm, Variant

logger = structlog.get_logger(__name__)


# ------------------------------------------------------------------
# Update rules
# ------------------------------------------------------------------


def inertia_weight(k: int, config: PSOConfig) -> float:
    """omega(k) = 2 * omega0 / (1 + exp(sigma * k / k_max))."""
    if not 0 <= k <= config.k_max:
        raise ValueError(f"iteration {k} outside [0, {config.k_max}]")
    return float(2.0 * config.omega0 * expit(-config.sigma * k / config.k_max))


def effective_inertia(k: int, config: PSOConfig) -> float:
    if config.inertia_mode is InertiaMode.CONSTANT:
        return config.omega_const
    return inertia_weight(min(k, config.k_max), config)


def _as_vectors(*vectors) -> list[np.ndarray]:
    arrays = [np.asarray(v, dtype=float) for v in vectors]
    shapes = {a.shape for a in arrays if a.ndim > 0}
    if len(shapes) > 1:
        raise ShapeMismatchError(f"vector shapes differ: {sorted(shapes)}")
    return arrays


def velocity_update_vanilla(v, z, p_i, p_g, c1: float, c2: float, r1, r2) -> np.ndarray:
    """v + c1*r1*(p_i - z) + c2*r2*(p_g - z), per dimension."""
    v, z, p_i, p_g, r1, r2 = _as_vectors(v, z, p_i, p_g, r1, r2)
    return v + c1 * r1 * (p_i - z) + c2 * r2 * (p_g - z)


def velocity_update_inertia(
    v, z, p_i, p_g, omega: float, c1: float, c2: float, r1, r2, *, v_max: float | None = None
) -> np.ndarray:
    """omega*v + c1*r1*(p_i - z) + c2*r2*(p_g - z), clamped to [-v_max, v_max] when given."""
    v, z, p_i, p_g, r1, r2 = _as_vectors(v, z, p_i, p_g, r1, r2)
    updated = omega * v + c1 * r1 * (p_i - z) + c2 * r2 * (p_g - z)
    if v_max is not None:
        updated = np.clip(updated, -v_max, v_max)
    return updated


def position_update(z, velocity, *, z_min: float, z_max: float) -> np.ndarray:
    z, velocity = _as_vectors(z, velocity)
    return np.clip(z + velocity, z_min, z_max)


def speed_coefficient(v_base_d: float, n: int, config: PSOConfig, sign: int) -> float:
    """Scale of sub-step ``n`` for one dimension.

    Low-speed dimensions (below N_i2) get ``n``, high-speed ones (at or above
    N_i1) get ``n / j``, the band in between gets ``1 + sign * n / j``.
    """
    if not 1 <= n <= config.j:
        raise ValueError(f"sub-step {n} outside [1, {config.j}]")
    speed = abs(v_base_d)
    if speed < config.velocity_floor:
        return float(n)
    if speed >= config.velocity_cap:
        return n / config.j
    return 1 + sign * n / config.j


def speed_coefficients(v_base: np.ndarray, n: int, config: PSOConfig, sign: int) -> np.ndarray:
    """Vector form of :func:`speed_coefficient` over every dimension."""
    speed = np.abs(v_base)
    return np.select(
        [speed < config.velocity_floor, speed >= config.velocity_cap],
        [float(n), n / config.j],
        default=1 + sign * n / config.j,
    )


# ------------------------------------------------------------------
# Evaluation
# ------------------------------------------------------------------


def _evaluate(objective: Objective, positions: Sequence[np.ndarray], executor: Executor | None) -> list[float]:
    if executor is None:
        return [float(objective(p)) for p in positions]
    return [float(f) for f in executor.map(objective, positions)]


def _draw_signs(rng: np.random.Generator, shape) -> np.ndarray:
    # one uniform per sign keeps bulk and per-particle draws on the same stream
    return np.where(rng.random(shape) < 0.5, -1, 1)


def _refinement_candidates(particle: Particle, config: PSOConfig, signs: np.ndarray) -> list[np.ndarray]:
    """The unrefined update first, then z0 + a(n) * v0 for n = 1..j, all clamped."""
    candidates = [particle.position]
    for n, sign in enumerate(signs, start=1):
        scale = speed_coefficients(particle.base_velocity, n, config, int(sign))
        candidates.append(
            position_update(particle.base_position, scale * particle.base_velocity, z_min=config.z_min, z_max=config.z_max)
        )
    return candidates


def _settle(
    particle: Particle,
    candidates: list[np.ndarray],
    fitnesses: list[float],
    *,
    index: int,
    iteration: int,
) -> None:
    """Move ``particle`` to its best candidate (earliest wins ties) and update its personal best."""
    for sub_step, value in enumerate(fitnesses):
        if not math.isfinite(value):
            raise NonFiniteFitnessError(particle=index, sub_step=sub_step, iteration=iteration, value=value)
    best = int(np.argmin(fitnesses))
    particle.position = candidates[best]
    particle.fitness = fitnesses[best]
    if particle.fitness < particle.personal_best_fitness:
        particle.personal_best = particle.position.copy()
        particle.personal_best_fitness = particle.fitness


def refine_substeps(
    particle: Particle,
    objective: Objective,
    config: PSOConfig,
    rng: np.random.Generator,
    *,
    index: int = 0,
    iteration: int = 0,
) -> Particle:
    """Line search along the base velocity with scales from :func:`speed_coefficient`.

    ``particle.position`` must already hold the unrefined update
    ``z0 + v0``; it stays a candidate, so refinement never does worse.
    Updates ``particle`` in place and returns it.

    Raises:
        NonFiniteFitnessError: a candidate evaluates to NaN or infinity.
    """
    signs = _draw_signs(rng, config.j)
    candidates = _refinement_candidates(particle, config, signs)
    _settle(particle, candidates, _evaluate(objective, candidates, None), index=index, iteration=iteration)
    return particle


# ------------------------------------------------------------------
# Swarm lifecycle
# ------------------------------------------------------------------


def swarm_init(objective: Objective, config: PSOConfig, *, executor: Executor | None = None) -> Swarm:
    """Uniform positions in the box, uniform velocities in +-min(N_i1, box width)."""
    rng = get_rng(config.seed)
    shape = (config.swarm_size, objective.dimension)
    positions = rng.uniform(config.z_min, config.z_max, size=shape)
    speed = min(config.velocity_cap, config.width)
    velocities = rng.uniform(-speed, speed, size=shape)

    fitnesses = _evaluate(objective, list(positions), executor)
    particles = []
    for index, (z, v, value) in enumerate(zip(positions, velocities, fitnesses, strict=True)):
        if not math.isfinite(value):
            raise NonFiniteFitnessError(particle=index, iteration=0, value=value)
        particles.append(
            Particle(
                position=z,
                velocity=v,
                personal_best=z.copy(),
                personal_best_fitness=value,
                fitness=value,
                base_position=z.copy(),
                base_velocity=v.copy(),
            )
        )

    leader = int(np.argmin(fitnesses))
    return Swarm(
        particles=particles,
        global_best=particles[leader].personal_best.copy(),
        global_best_fitness=particles[leader].personal_best_fitness,
        rng=rng,
    )


def pso_iteration(
    swarm: Swarm,
    objective: Objective,
    config: PSOConfig,
    variant: Variant,
    *,
    executor: Executor | None = None,
) -> Swarm:
    """One synchronous sweep over every particle. Mutates and returns ``swarm``.

    Raises:
        NonFiniteFitnessError: any evaluated position has non-finite fitness.
    """
    variant = Variant(variant)
    k = swarm.iteration + 1
    omega = effective_inertia(k, config)
    cap = config.velocity_cap
    draws = swarm.rng.random((len(swarm), 2, swarm.dimension))

    for particle, (r1, r2) in zip(swarm.particles, draws, strict=True):
        if variant is Variant.VANILLA:
            velocity = np.clip(
                velocity_update_vanilla(
                    particle.velocity, particle.position, particle.personal_best, swarm.global_best,
                    config.c1, config.c2, r1, r2,
                ),
                -cap,
                cap,
            )
        else:
            velocity = velocity_update_inertia(
                particle.velocity, particle.position, particle.personal_best, swarm.global_best,
                omega, config.c1, config.c2, r1, r2, v_max=cap,
            )
        particle.base_position = particle.position
        particle.base_velocity = velocity
        particle.velocity = velocity
        particle.position = position_update(particle.position, velocity, z_min=config.z_min, z_max=config.z_max)

    if variant is Variant.MPSO:
        signs = _draw_signs(swarm.rng, (len(swarm), config.j))
        candidate_sets = [_refinement_candidates(p, config, s) for p, s in zip(swarm.particles, signs, strict=True)]
    else:
        candidate_sets = [[p.position] for p in swarm.particles]

    flat = [c for candidates in candidate_sets for c in candidates]
    fitnesses = _evaluate(objective, flat, executor)
    offset = 0
    for index, (particle, candidates) in enumerate(zip(swarm.particles, candidate_sets, strict=True)):
        _settle(particle, candidates, fitnesses[offset : offset + len(candidates)], index=index, iteration=k)
        offset += len(candidates)

    leader = int(np.argmin([p.personal_best_fitness for p in swarm.particles]))
    if swarm.particles[leader].personal_best_fitness < swarm.global_best_fitness:
        swarm.global_best = swarm.particles[leader].personal_best.copy()
        swarm.global_best_fitness = swarm.particles[leader].personal_best_fitness
    swarm.iteration = k
    return swarm


def run_optimizer(objective: Objective, config: PSOConfig, variant: Variant) -> OptimizerResult:
    """Iterate until the global best reaches ``target_fitness`` or ``k_max`` sweeps are done.

    At least one sweep always runs; the trace holds the global best fitness
    after each sweep.
    """
    variant = Variant(variant)
    log = logger.bind(variant=str(variant), dimension=objective.dimension, swarm_size=config.swarm_size)
    executor = ThreadPoolExecutor(max_workers=config.workers) if config.workers > 1 else None
    try:
        swarm = swarm_init(objective, config, executor=executor)
        log.info("optimizer_started", initial_best=swarm.global_best_fitness, seed=config.seed)
        trace: list[float] = []
        while True:
            pso_iteration(swarm, objective, config, variant, executor=executor)
            trace.append(swarm.global_best_fitness)
            if swarm.iteration % 100 == 0:
                log.debug("optimizer_progress", iteration=swarm.iteration, best=swarm.global_best_fitness)
            if swarm.global_best_fitness <= config.target_fitness or swarm.iteration >= config.k_max:
                break
    finally:
        if executor is not None:
            executor.shutdown(wait=True)

    log.info(
        "optimizer_finished",
        iterations=swarm.iteration,
        best=swarm.global_best_fitness,
        reason="target_reached" if swarm.global_best_fitness <= config.target_fitness else "max_iterations",
    )
    return OptimizerResult(
        best_position=swarm.global_best.copy(),
        best_fitness=swarm.global_best_fitness,
        trace=tuple(trace),
        iterations_used=swarm.iteration,
    )
