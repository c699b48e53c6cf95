"""Build component configs from a resolved :class:`RunSettings`."""

from applications.forecast_experiments.schemas import ExperimentConfig, HybridConfig
from applications.neural_net.schemas import BPConfig, Topology
from applications.swarm_optimizer.schemas import PSOConfig

from .runconf import RunSettings


def get_topology(settings: RunSettings) -> Topology:
    """The network shape: one input per window month, a single output."""
    return Topology(input_len=settings.window_len, hidden_len=settings.hidden_len, output_len=1)


def get_pso_config(settings: RunSettings) -> PSOConfig:
    return PSOConfig(
        swarm_size=settings.swarm_size,
        c1=settings.c1,
        c2=settings.c2,
        sigma=settings.sigma,
        omega0=settings.omega0,
        omega_const=settings.omega_const,
        inertia_mode=settings.inertia_mode,
        j=settings.j,
        k_max=settings.k_max,
        target_fitness=settings.target_fitness,
        z_min=settings.z_min,
        z_max=settings.z_max,
        n_i1=settings.n_i1,
        n_i2=settings.n_i2,
        workers=settings.workers,
        seed=settings.seed,
    )


def get_bp_config(settings: RunSettings) -> BPConfig:
    return BPConfig(
        learning_rate=settings.learning_rate,
        momentum=settings.momentum,
        max_epochs=settings.max_epochs,
        target_loss=settings.target_loss,
        init_range=settings.init_range,
    )


def get_hybrid_config(settings: RunSettings) -> HybridConfig:
    return HybridConfig(swarm=get_pso_config(settings), bp=get_bp_config(settings), bp_refine=settings.bp_refine)


def get_experiment_config(settings: RunSettings) -> ExperimentConfig:
    """Everything a training run needs apart from the data and the seed."""
    return ExperimentConfig(
        topology=get_topology(settings),
        window_len=settings.window_len,
        hybrid=get_hybrid_config(settings),
    )
