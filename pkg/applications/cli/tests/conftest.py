"""Fixtures for command-line tests. Commands run in-process through ``main``."""

import numpy as np
import pytest

from applications.forecast_experiments.schemas import TrainedModel, Trainer
from applications.forecast_experiments.services import ModelStoreService
from applications.neural_net.schemas import NetworkParams, Topology
from applications.timeseries_data.schemas import NormalizationParams
from config.settings.base import SAMPLE_DATA_PATH

QUICK_CONFIG = """\
# small budgets for tests
hidden_len = 3
swarm_size = 6
k_max = 5
target_fitness = 0
max_epochs = 20
"""


@pytest.fixture(autouse=True)
def logging_setup(mocker):
    """Keep the commands from reconfiguring global logging."""
    return mocker.patch("applications.cli.main.configure_logging")


@pytest.fixture
def sample_csv():
    return SAMPLE_DATA_PATH


@pytest.fixture
def quick_config(tmp_path):
    path = tmp_path / "quick.conf"
    path.write_text(QUICK_CONFIG)
    return path


@pytest.fixture
def constant_model_file(tmp_path):
    """Factory: a window-12 model file whose every prediction is ``kwh`` (training range 30..40)."""

    def _make(kwh: float, name: str = "constant.json"):
        params = NetworkParams(
            w1=np.zeros((2, 12)),
            b1=np.zeros(2),
            w2=np.zeros((1, 2)),
            b2=np.array([(kwh - 30.0) / 10.0]),
        )
        model = TrainedModel(
            topology=Topology(input_len=12, hidden_len=2),
            params=params,
            normalization=NormalizationParams(min=30.0, max=40.0),
            window_len=12,
            trainer=Trainer.MPSO_BP,
            iterations_used=0,
            final_fitness=0.0,
            seed=0,
        )
        return ModelStoreService.save_model(model, tmp_path / name)

    return _make
