"""Fixtures for neural_net tests."""

import numpy as np
import pytest

from applications.neural_net.schemas import NetworkParams, Topology
from applications.neural_net.services import init_params
from applications.timeseries_data.schemas import NormalizationParams, WindowedDataset

UNIT_NORM = NormalizationParams(min=0.0, max=1.0)


def make_dataset(inputs, targets) -> WindowedDataset:
    inputs = np.atleast_2d(np.asarray(inputs, dtype=float))
    targets = np.asarray(targets, dtype=float).reshape(inputs.shape[0], -1)
    return WindowedDataset(window_len=inputs.shape[1], inputs=inputs, targets=targets, norm=UNIT_NORM)


def scalar_params(w1: float, b1: float, w2: float, b2: float) -> NetworkParams:
    """Topology (1, 1, 1) parameters."""
    return NetworkParams(w1=np.array([[w1]]), b1=np.array([b1]), w2=np.array([[w2]]), b2=np.array([b2]))


@pytest.fixture
def default_topology() -> Topology:
    return Topology(input_len=12, hidden_len=6, output_len=1)


@pytest.fixture
def random_params(default_topology) -> NetworkParams:
    return init_params(default_topology, seed=42, init_range=0.5)
