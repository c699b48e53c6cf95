"""Fixtures for forecast_experiments tests."""

import numpy as np
import pytest

from applications.forecast_experiments.schemas import ExperimentConfig, HybridConfig, TrainedModel, Trainer
from applications.neural_net.schemas import BPConfig, NetworkParams, Topology
from applications.neural_net.services import init_params
from applications.swarm_optimizer.schemas import PSOConfig
from applications.timeseries_data.schemas import NormalizationParams

# Published MPSO-BP one-step rows: (true, predicted, relative error %) for the self-consistent months.
PUBLISHED_ONE_STEP_ROWS = [
    (36.82, 36.18, 1.739),
    (36.87, 35.86, 2.734),
    (36.84, 36.49, 0.947),
    (35.16, 36.19, -2.930),
]

# Published spot-check rows: (month, original, predicted, accuracy %).
PUBLISHED_SPOT_CHECK_ROWS = [
    ("2011-08", 36.22, 36.10, 99.7),
    ("2012-11", 36.67, 36.76, 99.8),
    ("2013-12", 34.23, 34.03, 99.4),
    ("2014-04", 36.36, 36.86, 98.6),
    ("2015-07", 35.38, 35.34, 99.9),
]

NORM_30_40 = NormalizationParams(min=30.0, max=40.0)


def constant_model(output: float, *, window_len: int = 3, norm: NormalizationParams = NORM_30_40) -> TrainedModel:
    """Zero weights; every prediction is ``denormalize(output)``."""
    topology = Topology(input_len=window_len, hidden_len=2, output_len=1)
    params = NetworkParams(
        w1=np.zeros((2, window_len)),
        b1=np.zeros(2),
        w2=np.zeros((1, 2)),
        b2=np.array([output]),
    )
    return TrainedModel(
        topology=topology,
        params=params,
        normalization=norm,
        window_len=window_len,
        trainer=Trainer.MPSO_BP,
        iterations_used=0,
        final_fitness=0.0,
        seed=0,
    )


@pytest.fixture
def random_model() -> TrainedModel:
    """Window 4, small random weights; predictions stay well inside positive kWh/t."""
    topology = Topology(input_len=4, hidden_len=3, output_len=1)
    return TrainedModel(
        topology=topology,
        params=init_params(topology, seed=5, init_range=0.5),
        normalization=NormalizationParams(min=34.0, max=37.0),
        window_len=4,
        trainer=Trainer.PSO_BP,
        iterations_used=12,
        final_fitness=0.01,
        seed=5,
    )


@pytest.fixture
def quick_config() -> ExperimentConfig:
    """Window 6, a small swarm and short budgets, swarm stage only."""
    return ExperimentConfig(
        topology=Topology(input_len=6, hidden_len=3, output_len=1),
        window_len=6,
        hybrid=HybridConfig(
            swarm=PSOConfig(swarm_size=8, k_max=15, target_fitness=0.0),
            bp=BPConfig(max_epochs=40),
            bp_refine=False,
        ),
    )
