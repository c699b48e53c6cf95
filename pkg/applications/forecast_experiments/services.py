"""Service layer for forecast_experiments.

Builds the training objective from a network and a windowed dataset, runs
the gradient, swarm and hybrid trainers, evaluates models one step ahead on
held-out months and forecasts recursively past the end of a series.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from pathlib import Path

import numpy as np
import structlog

from applications.neural_net.persistence import (
    ModelDocument,
    NormalizationDocument,
    TopologyDocument,
    read_model_document,
    write_model_document,
)
from applications.neural_net.schemas import BPConfig, NetworkParams, Topology
from applications.neural_net.services import (
    backprop,
    flatten,
    forward,
    init_params,
    momentum_step,
    mse_loss,
    unflatten,
)
from applications.swarm_optimizer.schemas import Variant
from applications.swarm_optimizer.services import run_optimizer
from applications.timeseries_data.schemas import NormalizationParams, TimeSeries, WindowedDataset
from applications.timeseries_data.services import ScalingService
from shared.exceptions import (
    DivergenceError,
    InsufficientHistoryError,
    InvalidValueError,
    ModelFileError,
    ShapeMismatchError,
)
from shared.months import YearMonth

from .metrics import accuracy_percent, build_metrics_report, relative_error
from .schemas import (
    ForecastPoint,
    HybridConfig,
    MetricsReport,
    MetricsRow,
    SpotCheckReport,
    SpotCheckRow,
    TrainedModel,
    Trainer,
    TrainingOutcome,
)

logger = structlog.get_logger(__name__)

_TRAINER_BY_VARIANT = {
    Variant.VANILLA: Trainer.PSO,
    Variant.INERTIA: Trainer.PSO_BP,
    Variant.MPSO: Trainer.MPSO_BP,
}


# ------------------------------------------------------------------
# Objective
# ------------------------------------------------------------------


def _check_widths(topology: Topology, dataset: WindowedDataset) -> None:
    if dataset.inputs.shape[1] != topology.input_len or dataset.targets.shape[1] != topology.output_len:
        raise ShapeMismatchError(
            f"dataset shapes {dataset.inputs.shape}/{dataset.targets.shape} do not match topology {topology}"
        )


class NetworkObjective:
    """Training-set MSE of the network whose flat parameters are the position.

    Pure and safe to call from several threads.
    """

    def __init__(self, topology: Topology, dataset: WindowedDataset):
        _check_widths(topology, dataset)
        self.topology = topology
        self.dataset = dataset
        self.dimension = topology.dimension

    def __call__(self, position: np.ndarray) -> float:
        return mse_loss(unflatten(self.topology, position), self.dataset)


# ------------------------------------------------------------------
# Trainers
# ------------------------------------------------------------------


def _gradient_descent(
    params: NetworkParams,
    dataset: WindowedDataset,
    config: BPConfig,
) -> tuple[NetworkParams, float, list[float]]:
    loss = mse_loss(params, dataset)
    update = np.zeros(params.topology.dimension)
    trace: list[float] = []
    epoch = 0
    while loss > config.target_loss and epoch < config.max_epochs:
        epoch += 1
        try:
            params, update = momentum_step(params, backprop(params, dataset), update, config)
        except ValueError as exc:
            raise DivergenceError(epoch=epoch, loss=math.nan) from exc
        loss = mse_loss(params, dataset)
        if not math.isfinite(loss):
            raise DivergenceError(epoch=epoch, loss=loss)
        trace.append(loss)

    logger.info(
        "bp_stopped",
        epochs=epoch,
        loss=loss,
        reason="target_reached" if loss <= config.target_loss else "max_epochs",
    )
    return params, loss, trace


# ------------------------------------------------------------------
# Prediction
# ------------------------------------------------------------------


def _predict_raw(model: TrainedModel, window: np.ndarray) -> float:
    """One step ahead in kWh/t from ``window_len`` raw values."""
    scaled = ScalingService.normalize(np.asarray(window, dtype=float), model.normalization)
    return float(ScalingService.denormalize(forward(model.params, scaled)[0], model.normalization))


def _preceding_values(series: TimeSeries, month: YearMonth, count: int) -> np.ndarray:
    """The ``count`` true values right before ``month``."""
    first = month.shift(-count)
    if first < series.start or month.shift(-1) > series.end:
        raise InsufficientHistoryError(
            f"{month} needs {count} months of history from {first}; series covers {series.start}..{series.end}"
        )
    offset = first.index - series.start.index
    return series.values[offset : offset + count]


class TrainingService:
    """Objective construction and the gradient, swarm and hybrid trainers."""

    @staticmethod
    def build_objective(topology: Topology, dataset: WindowedDataset) -> NetworkObjective:
        return NetworkObjective(topology, dataset)

    @staticmethod
    def prepare_dataset(series: TimeSeries, window_len: int) -> WindowedDataset:
        """Fit scaling on ``series`` and window it."""
        return ScalingService.make_windows(series, window_len, ScalingService.fit_normalization(series))

    @staticmethod
    def train_bp(
        dataset: WindowedDataset,
        topology: Topology,
        config: BPConfig,
        seed: int,
    ) -> TrainingOutcome:
        """Full-batch momentum gradient descent from a seeded uniform init.

        The trace holds the loss after every epoch.

        Raises:
            DivergenceError: the loss or the weights become non-finite.
        """
        _check_widths(topology, dataset)
        params = init_params(topology, seed, config.init_range)
        params, loss, trace = _gradient_descent(params, dataset, config)
        model = TrainedModel(
            topology=topology,
            params=params,
            normalization=dataset.norm,
            window_len=dataset.window_len,
            trainer=Trainer.BP,
            iterations_used=len(trace),
            final_fitness=loss,
            seed=seed,
        )
        logger.info("training_completed", trainer=str(Trainer.BP), seed=seed, iterations=len(trace), fitness=loss)
        return TrainingOutcome(model=model, trace=tuple(trace), target=config.target_loss)

    @staticmethod
    def train_swarm_hybrid(
        dataset: WindowedDataset,
        topology: Topology,
        config: HybridConfig,
        variant: Variant,
        seed: int,
    ) -> TrainingOutcome:
        """Swarm search over flat network parameters, then BP fine-tuning.

        Fine-tuning runs when ``config.bp_refine`` is set and the variant is not
        ``vanilla``; it starts from the swarm's best position.
        """
        variant = Variant(variant)
        trainer = _TRAINER_BY_VARIANT[variant]
        objective = TrainingService.build_objective(topology, dataset)
        swarm_config = config.swarm.model_copy(update={"seed": seed})

        result = run_optimizer(objective, swarm_config, variant)
        params = unflatten(topology, result.best_position)
        fitness = result.best_fitness
        refine_trace: list[float] = []
        if config.bp_refine and variant is not Variant.VANILLA:
            params, fitness, refine_trace = _gradient_descent(params, dataset, config.bp)

        model = TrainedModel(
            topology=topology,
            params=params,
            normalization=dataset.norm,
            window_len=dataset.window_len,
            trainer=trainer,
            iterations_used=result.iterations_used,
            final_fitness=fitness,
            seed=seed,
            refine_epochs=len(refine_trace),
        )
        logger.info(
            "training_completed",
            trainer=str(trainer),
            seed=seed,
            iterations=result.iterations_used,
            refine_epochs=len(refine_trace),
            fitness=fitness,
        )
        return TrainingOutcome(
            model=model,
            trace=result.trace,
            target=swarm_config.target_fitness,
            refine_trace=tuple(refine_trace),
        )

    @staticmethod
    def train(
        trainer: Trainer,
        dataset: WindowedDataset,
        topology: Topology,
        config: HybridConfig,
        seed: int,
    ) -> TrainingOutcome:
        trainer = Trainer(trainer)
        if trainer is Trainer.BP:
            return TrainingService.train_bp(dataset, topology, config.bp, seed)
        return TrainingService.train_swarm_hybrid(dataset, topology, config, trainer.variant, seed)


class PredictionService:
    """One-step evaluation, recursive forecasts and spot checks of a trained model."""

    @staticmethod
    def evaluate(model: TrainedModel, test: TimeSeries, history: TimeSeries) -> MetricsReport:
        """One-step-ahead predictions over ``test`` fed with true values.

        ``history`` must cover the ``window_len`` months right before
        ``test.start``; it may extend into the test range.

        Raises:
            InsufficientHistoryError: the months before the test range are missing.
        """
        window = model.window_len
        context = _preceding_values(history, test.start, window)
        values = np.concatenate([context, test.values])

        rows = []
        clamp_flag = False
        for i, point in enumerate(test.points):
            predicted = _predict_raw(model, values[i : i + window])
            clamp_flag |= not model.normalization.min <= predicted <= model.normalization.max
            rows.append(
                MetricsRow(
                    month=point.month,
                    true=point.value,
                    predicted=predicted,
                    relative_error=relative_error(point.value, predicted),
                )
            )

        report = build_metrics_report(rows, clamp_flag=clamp_flag, trainer=str(model.trainer))
        logger.info(
            "model_evaluated",
            trainer=str(model.trainer),
            months=len(rows),
            mse=report.mse,
            average_relative_error=report.average_relative_error,
        )
        return report

    @staticmethod
    def predict_horizon(model: TrainedModel, history: TimeSeries, horizon: int) -> list[ForecastPoint]:
        """Recursive forecast of ``horizon`` months after ``history``.

        Each raw prediction joins the working window for the next step; the
        clamped copy is reported alongside.

        Raises:
            InvalidValueError: ``horizon`` < 1.
            InsufficientHistoryError: ``history`` is shorter than ``window_len``.
        """
        if horizon < 1:
            raise InvalidValueError(f"horizon must be >= 1, got {horizon}")
        if len(history) < model.window_len:
            raise InsufficientHistoryError(f"history has {len(history)} months, window needs {model.window_len}")

        window = list(history.values[-model.window_len :])
        norm: NormalizationParams = model.normalization
        points = []
        for step in range(1, horizon + 1):
            predicted = _predict_raw(model, np.array(window))
            clamped = float(ScalingService.clamp_to_range(predicted, norm))
            points.append(
                ForecastPoint(
                    month=history.end.shift(step),
                    predicted=predicted,
                    clamped=clamped,
                    out_of_range=clamped != predicted,
                )
            )
            window = window[1:] + [predicted]
        return points

    @staticmethod
    def spot_check(model: TrainedModel, series: TimeSeries, months: Sequence[YearMonth]) -> SpotCheckReport:
        """Accuracy of one-step predictions at chosen months, each fed true history.

        Raises:
            InvalidValueError: a month lies outside ``series``.
            InsufficientHistoryError: fewer than ``window_len`` months precede it.
        """
        rows = []
        for month in months:
            if month not in series:
                raise InvalidValueError(f"{month} is outside the series {series.start}..{series.end}")
            original = series.value_at(month)
            predicted = _predict_raw(model, _preceding_values(series, month, model.window_len))
            rows.append(
                SpotCheckRow(
                    month=month,
                    original=original,
                    predicted=predicted,
                    accuracy=accuracy_percent(original, predicted),
                )
            )
        return SpotCheckReport(rows=tuple(rows))


class ModelStoreService:
    """Model files on disk."""

    @staticmethod
    def save_model(model: TrainedModel, path: Path) -> Path:
        document = ModelDocument(
            topology=TopologyDocument.from_topology(model.topology),
            flat_params=[float(v) for v in flatten(model.params)],
            normalization=NormalizationDocument(min=model.normalization.min, max=model.normalization.max),
            window_len=model.window_len,
            seed=model.seed,
            trainer=str(model.trainer),
            iterations_used=model.iterations_used,
            refine_epochs=model.refine_epochs,
            final_fitness=model.final_fitness,
        )
        return write_model_document(Path(path), document)

    @staticmethod
    def load_model(path: Path) -> TrainedModel:
        """Rebuild a :class:`TrainedModel` from a model file.

        Raises:
            DataFileError: the file does not exist.
            ModelFileError: the file is malformed or inconsistent.
        """
        document = read_model_document(Path(path))
        try:
            trainer = Trainer(document.trainer)
            topology = document.topology.to_topology()
            params = unflatten(topology, document.flat_params)
            normalization = NormalizationParams(min=document.normalization.min, max=document.normalization.max)
        except ValueError as exc:
            raise ModelFileError(f"{path}: {exc}") from exc

        return TrainedModel(
            topology=topology,
            params=params,
            normalization=normalization,
            window_len=document.window_len,
            trainer=trainer,
            iterations_used=document.iterations_used,
            final_fitness=document.final_fitness if document.final_fitness is not None else math.nan,
            seed=document.seed,
            refine_epochs=document.refine_epochs,
        )
