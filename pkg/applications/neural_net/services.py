"""Service layer for neural_net.

Forward evaluation, mean-squared-error loss, exact backpropagation,
momentum steps and the flatten/unflatten bridge to optimizer positions.
Every function is pure and reentrant.

Flat layout: ``w1`` row-major, then ``b1``, then ``w2`` row-major, then ``b2``.
"""

import numpy as np
import structlog
from scipy.special import expit

from applications.timeseries_data.schemas import WindowedDataset
from shared.exceptions import ShapeMismatchError
from shared.seeding import get_rng

from .schemas import BPConfig, Gradient, NetworkParams, Topology

logger = structlog.get_logger(__name__)


# ------------------------------------------------------------------
# Parameter vectors
# ------------------------------------------------------------------


def init_params(topology: Topology, seed: int, init_range: float) -> NetworkParams:
    """Uniform draws from [-init_range, +init_range] in flat-layout order."""
    if init_range <= 0:
        raise ValueError(f"init_range must be > 0, got {init_range}")
    rng = get_rng(seed)
    return unflatten(topology, rng.uniform(-init_range, init_range, size=topology.dimension))


def flatten(params: NetworkParams) -> np.ndarray:
    return np.concatenate([params.w1.ravel(), params.b1, params.w2.ravel(), params.b2])


def unflatten(topology: Topology, vector, *, cls: type[NetworkParams] = NetworkParams) -> NetworkParams:
    """Inverse of :func:`flatten`.

    Raises:
        ShapeMismatchError: vector length differs from ``topology.dimension``.
    """
    vector = np.asarray(vector, dtype=float)
    if vector.shape != (topology.dimension,):
        raise ShapeMismatchError(f"expected a vector of length {topology.dimension}, got shape {vector.shape}")

    i, h, o = topology.input_len, topology.hidden_len, topology.output_len
    cuts = np.cumsum([h * i, h, o * h])
    w1, b1, w2, b2 = np.split(vector.copy(), cuts)
    return cls(w1=w1.reshape(h, i), b1=b1, w2=w2.reshape(o, h), b2=b2)


# ------------------------------------------------------------------
# Evaluation
# ------------------------------------------------------------------


def _hidden(params: NetworkParams, inputs: np.ndarray) -> np.ndarray:
    return expit(inputs @ params.w1.T + params.b1)


def forward_batch(params: NetworkParams, inputs: np.ndarray) -> np.ndarray:
    """Outputs for a batch of shape (n, input_len); returns (n, output_len)."""
    inputs = np.asarray(inputs, dtype=float)
    if inputs.ndim != 2 or inputs.shape[1] != params.w1.shape[1]:
        raise ShapeMismatchError(f"expected inputs of shape (n, {params.w1.shape[1]}), got {inputs.shape}")
    return _hidden(params, inputs) @ params.w2.T + params.b2


def forward(params: NetworkParams, inputs) -> np.ndarray:
    """Output vector for one input vector.

    Raises:
        ShapeMismatchError: input length differs from ``input_len``.
    """
    inputs = np.asarray(inputs, dtype=float)
    if inputs.shape != (params.w1.shape[1],):
        raise ShapeMismatchError(f"expected an input of length {params.w1.shape[1]}, got shape {inputs.shape}")
    return forward_batch(params, inputs[np.newaxis, :])[0]


def _check_dataset(params: NetworkParams, dataset: WindowedDataset) -> None:
    if len(dataset) == 0:
        raise ShapeMismatchError("dataset is empty")
    if dataset.inputs.shape[1] != params.w1.shape[1] or dataset.targets.shape[1] != params.w2.shape[0]:
        raise ShapeMismatchError(
            f"dataset shapes {dataset.inputs.shape}/{dataset.targets.shape} do not match topology {params.topology}"
        )


def mse_loss(params: NetworkParams, dataset: WindowedDataset) -> float:
    """(1/n) * sum over samples and outputs of (prediction - target)^2."""
    _check_dataset(params, dataset)
    residual = forward_batch(params, dataset.inputs) - dataset.targets
    return float(np.sum(residual**2) / len(dataset))


def backprop(params: NetworkParams, dataset: WindowedDataset) -> Gradient:
    """Exact gradient of :func:`mse_loss` at ``params``."""
    _check_dataset(params, dataset)
    n = len(dataset)
    hidden = _hidden(params, dataset.inputs)
    outputs = hidden @ params.w2.T + params.b2

    delta_out = 2.0 * (outputs - dataset.targets) / n
    delta_hidden = (delta_out @ params.w2) * hidden * (1.0 - hidden)

    return Gradient(
        w1=delta_hidden.T @ dataset.inputs,
        b1=delta_hidden.sum(axis=0),
        w2=delta_out.T @ hidden,
        b2=delta_out.sum(axis=0),
    )


# ------------------------------------------------------------------
# Training step
# ------------------------------------------------------------------


def momentum_step(
    params: NetworkParams,
    gradient: Gradient,
    previous_update: np.ndarray,
    config: BPConfig,
) -> tuple[NetworkParams, np.ndarray]:
    """update = -alpha * gradient + eta * previous_update; params + update.

    ``previous_update`` and the returned update are flat vectors.
    """
    if gradient.topology != params.topology:
        raise ShapeMismatchError(f"gradient topology {gradient.topology} does not match {params.topology}")
    flat_grad = flatten(gradient)
    previous_update = np.asarray(previous_update, dtype=float)
    if previous_update.shape != flat_grad.shape:
        raise ShapeMismatchError(f"previous update has shape {previous_update.shape}, expected {flat_grad.shape}")

    update = -config.learning_rate * flat_grad + config.momentum * previous_update
    return unflatten(params.topology, flatten(params) + update), update
