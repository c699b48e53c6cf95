"""Subcommand handlers.

Each handler takes the parsed ``argparse.Namespace``, writes its artifacts,
prints a short result on stdout and returns the exit status.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import structlog

from applications.forecast_experiments.orchestrator import compare_models
from applications.forecast_experiments.reports import (
    forecast_csv,
    metrics_rows_csv,
    render_comparison_table,
    render_metrics_table,
    render_spot_check_table,
)
from applications.forecast_experiments.schemas import Trainer
from applications.forecast_experiments.services import ModelStoreService, PredictionService, TrainingService
from applications.swarm_optimizer.trace import export_trace_csv
from applications.timeseries_data.schemas import TimeSeries
from applications.timeseries_data.services import SeriesService
from config.settings.factory import get_experiment_config
from config.settings.runconf import RunSettings
from shared.exceptions import ConfigError
from shared.months import YearMonth
from shared.serialization import write_json, write_text

logger = structlog.get_logger(__name__)

MODEL_FILE = "model.json"
TRACE_FILE = "trace.csv"
REFINE_TRACE_FILE = "refine_trace.csv"


def _resolve_settings(args: argparse.Namespace) -> RunSettings:
    """Flags over the config file over environment over defaults."""
    return RunSettings.load(
        args.config,
        seed=getattr(args, "seed", None),
        split=getattr(args, "split", None),
        workers=getattr(args, "workers", None),
    )


def _split(series: TimeSeries, settings: RunSettings, *, required: bool) -> tuple[TimeSeries, TimeSeries | None]:
    boundary = settings.split_month
    if boundary is None:
        if required:
            raise ConfigError("a split month is required (--split or 'split' in the config file)")
        return series, None
    return SeriesService.split_train_test(series, boundary)


def _parse_int_list(text: str, flag: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise ConfigError(f"{flag} expects comma-separated integers, got {text!r}") from exc
    if not values:
        raise ConfigError(f"{flag} needs at least one value")
    return values


def _parse_months(text: str) -> list[YearMonth]:
    try:
        return [YearMonth.parse(part.strip()) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise ConfigError(f"--spot-months expects comma-separated YYYY-MM months, got {text!r}") from exc


def _emit(text: str) -> None:
    sys.stdout.write(text)


def cmd_train(args: argparse.Namespace) -> int:
    settings = _resolve_settings(args)
    trainer = Trainer.from_flag(args.algorithm)
    experiment = get_experiment_config(settings)

    series = SeriesService.load_series(args.data)
    train_series, _ = _split(series, settings, required=False)
    dataset = TrainingService.prepare_dataset(train_series, experiment.window_len)
    outcome = TrainingService.train(trainer, dataset, experiment.topology, experiment.hybrid, settings.seed)

    out_dir = Path(args.out)
    ModelStoreService.save_model(outcome.model, out_dir / MODEL_FILE)
    write_text(out_dir / TRACE_FILE, export_trace_csv(outcome.trace))
    if outcome.refine_trace:
        write_text(out_dir / REFINE_TRACE_FILE, export_trace_csv(outcome.refine_trace))

    model = outcome.model
    _emit(
        f"trainer: {model.trainer}\n"
        f"final fitness: {model.final_fitness!r}\n"
        f"iterations: {model.iterations_used}\n"
        f"refine epochs: {model.refine_epochs}\n"
        f"reached target: {outcome.reached_target}\n"
    )
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    settings = _resolve_settings(args)
    model = ModelStoreService.load_model(args.model)
    series = SeriesService.load_series(args.data)
    history, test = _split(series, settings, required=True)

    report = PredictionService.evaluate(model, test, history)
    text = render_metrics_table(report)
    out_dir = Path(args.out) if args.out else Path(args.model).parent
    write_json(out_dir / "metrics.json", report)
    write_text(out_dir / "metrics.txt", text)
    write_text(out_dir / "metrics.csv", metrics_rows_csv(report))

    if args.spot_months:
        spots = PredictionService.spot_check(model, series, _parse_months(args.spot_months))
        spot_text = render_spot_check_table(spots)
        text = f"{text}\n{spot_text}"
        write_json(out_dir / "spot_check.json", spots)
    _emit(text)
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    settings = _resolve_settings(args)
    seeds = _parse_int_list(args.seeds, "--seeds")
    series = SeriesService.load_series(args.data)
    train_series, test = _split(series, settings, required=True)

    report = compare_models(train_series, test, get_experiment_config(settings), seeds, workers=args.jobs)
    text = render_comparison_table(report)
    out_dir = Path(args.out)
    write_json(out_dir / "comparison.json", report)
    write_text(out_dir / "comparison.txt", text)
    _emit(text)
    return 0


def cmd_predict(args: argparse.Namespace) -> int:
    model = ModelStoreService.load_model(args.model)
    series = SeriesService.load_series(args.data)
    points = PredictionService.predict_horizon(model, series, args.horizon)

    text = forecast_csv(points)
    if args.out:
        write_text(Path(args.out), text)
    if any(p.out_of_range for p in points):
        logger.warning("forecast_out_of_range", months=[str(p.month) for p in points if p.out_of_range])
    _emit(text)
    return 0
