"""
Experiment Orchestrator

The one place where trainers, evaluation and reporting meet.

For every seed it:
- fits scaling on the training months and windows them
- trains BP, PSO-BP and MPSO-BP on identical data, topology and seed
- evaluates each model one step ahead on the test months
- turns the trace and metrics into a comparison row

Training runs are independent and may run on a thread pool; rows are
always assembled in seed order, then trainer order, so the report does not
depend on scheduling.
"""

from __future__ import annotations

import statistics
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor

import structlog

from applications.timeseries_data.schemas import TimeSeries
from shared.exceptions import InvalidValueError

from .schemas import (
    COMPARED_TRAINERS,
    ComparisonReport,
    ComparisonRow,
    ExperimentConfig,
    MetricsReport,
    Trainer,
    TrainingOutcome,
)
from .services import PredictionService, TrainingService

logger = structlog.get_logger(__name__)


class ExperimentOrchestrator:
    """Runs the trainer comparison for one experiment configuration."""

    def __init__(self, config: ExperimentConfig, *, trainers: Sequence[Trainer] = COMPARED_TRAINERS, workers: int = 1):
        self.config = config
        self.trainers = tuple(Trainer(t) for t in trainers)
        self.workers = workers

    # ========================================================================
    # SECTION 1: SINGLE RUNS
    # ========================================================================

    def run_trainer(self, trainer: Trainer, train_series: TimeSeries, test: TimeSeries, seed: int) -> ComparisonRow:
        dataset = TrainingService.prepare_dataset(train_series, self.config.window_len)
        outcome = TrainingService.train(trainer, dataset, self.config.topology, self.config.hybrid, seed)
        metrics = PredictionService.evaluate(outcome.model, test, train_series)
        return self.build_row(outcome, metrics)

    @staticmethod
    def build_row(outcome: TrainingOutcome, metrics: MetricsReport) -> ComparisonRow:
        model = outcome.model
        return ComparisonRow(
            model=str(model.trainer),
            seed=model.seed,
            target_accuracy=outcome.target,
            iterations=model.total_iterations,
            refine_epochs=model.refine_epochs,
            average_relative_error=metrics.average_relative_error,
            max_relative_error=metrics.max_relative_error,
            final_fitness=model.final_fitness,
            reached_target=outcome.reached_target,
        )

    # ========================================================================
    # SECTION 2: COMPARISON
    # ========================================================================

    def compare_models(self, train_series: TimeSeries, test: TimeSeries, seeds: Sequence[int]) -> ComparisonReport:
        """Train every trainer on every seed and aggregate per trainer.

        Aggregates: median iterations and fine-tuning epochs, mean average relative error, max of
        maximum relative error, median final fitness.
        """
        seeds = tuple(seeds)
        if not seeds:
            raise InvalidValueError("at least one seed is required")
        jobs = [(trainer, seed) for seed in seeds for trainer in self.trainers]
        logger.info("comparison_started", seeds=list(seeds), trainers=[str(t) for t in self.trainers])

        if self.workers > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                rows = list(pool.map(lambda job: self.run_trainer(job[0], train_series, test, job[1]), jobs))
        else:
            rows = [self.run_trainer(trainer, train_series, test, seed) for trainer, seed in jobs]

        report = ComparisonReport(
            seeds=seeds,
            rows=tuple(rows),
            aggregate=tuple(self.aggregate(trainer, [r for r in rows if r.model == trainer]) for trainer in self.trainers),
        )
        logger.info("comparison_completed", rows=len(report.rows))
        return report

    @staticmethod
    def aggregate(trainer: Trainer, rows: Sequence[ComparisonRow]) -> ComparisonRow:
        return ComparisonRow(
            model=str(trainer),
            seed=None,
            target_accuracy=rows[0].target_accuracy,
            iterations=float(statistics.median(r.iterations for r in rows)),
            refine_epochs=float(statistics.median(r.refine_epochs for r in rows)),
            average_relative_error=statistics.fmean(r.average_relative_error for r in rows),
            max_relative_error=max(r.max_relative_error for r in rows),
            final_fitness=float(statistics.median(r.final_fitness for r in rows)),
            reached_target=all(r.reached_target for r in rows),
        )


def compare_models(
    train_series: TimeSeries,
    test: TimeSeries,
    config: ExperimentConfig,
    seeds: Sequence[int],
    *,
    workers: int = 1,
) -> ComparisonReport:
    return ExperimentOrchestrator(config, workers=workers).compare_models(train_series, test, seeds)
