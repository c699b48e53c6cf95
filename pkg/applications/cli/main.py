"""Command-line entry point: ``train``, ``eval``, ``compare`` and ``predict``.

Exit status 0 on success, 1 on bad input or configuration, 2 when training
produces non-finite numbers.
"""

from __future__ import annotations

import argparse
from collections.abc import Sequence
from pathlib import Path

from applications.forecast_experiments.schemas import Trainer
from config.settings.base import configure_logging
from shared.exceptions import ConfigError

from .commands import cmd_compare, cmd_eval, cmd_predict, cmd_train
from .middleware import CommandErrorMiddleware


class CommandParser(argparse.ArgumentParser):
    """Raises :class:`ConfigError` on bad flags instead of exiting with status 2."""

    def error(self, message: str):
        raise ConfigError(f"{self.prog}: {message}")


def build_parser() -> CommandParser:
    logging_flags = CommandParser(add_help=False)
    logging_flags.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"], type=str.upper)
    logging_flags.add_argument("--log-format", choices=["console", "json"])

    # run settings; predict reads none of them
    common = CommandParser(add_help=False, parents=[logging_flags])
    common.add_argument("--config", type=Path, help="key=value config file")
    common.add_argument("--seed", type=int, help="Random seed (overrides config and SWARM_FORECAST_SEED)")
    common.add_argument("--workers", type=int, help="Threads for fitness evaluation")

    parser = CommandParser(prog="swarm-forecast", description="Train and apply swarm-optimised consumption forecasters.")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=CommandParser)

    train_p = subparsers.add_parser("train", parents=[common], help="Train a model and write model.json and trace.csv")
    train_p.add_argument("--data", type=Path, required=True, help="month,value CSV")
    train_p.add_argument("--algorithm", required=True, choices=[t.flag for t in Trainer])
    train_p.add_argument("--out", type=Path, required=True, help="Output directory")
    train_p.add_argument("--split", help="First held-out month (YYYY-MM); earlier months train")
    train_p.set_defaults(handler=cmd_train)

    eval_p = subparsers.add_parser("eval", parents=[common], help="One-step evaluation on the months from --split on")
    eval_p.add_argument("--model", type=Path, required=True)
    eval_p.add_argument("--data", type=Path, required=True)
    eval_p.add_argument("--split", help="First test month (YYYY-MM)")
    eval_p.add_argument(
        "--out", type=Path, help="Directory for metrics.json, metrics.txt and metrics.csv (default: the model file's directory)"
    )
    eval_p.add_argument("--spot-months", help="Comma-separated months for an accuracy spot check")
    eval_p.set_defaults(handler=cmd_eval)

    compare_p = subparsers.add_parser("compare", parents=[common], help="Compare BP, PSO-BP and MPSO-BP")
    compare_p.add_argument("--data", type=Path, required=True)
    compare_p.add_argument("--split", help="First test month (YYYY-MM)")
    compare_p.add_argument("--seeds", required=True, help="Comma-separated seeds, e.g. 1,2,3")
    compare_p.add_argument("--jobs", type=int, default=1, help="Training runs in parallel")
    compare_p.add_argument(
        "--out", type=Path, default=Path("."), help="Directory for comparison.json and comparison.txt (default: current directory)"
    )
    compare_p.set_defaults(handler=cmd_compare)

    predict_p = subparsers.add_parser("predict", parents=[logging_flags], help="Recursive forecast after the end of --data")
    predict_p.add_argument("--model", type=Path, required=True)
    predict_p.add_argument("--data", type=Path, required=True)
    predict_p.add_argument("--horizon", type=int, required=True, help="Months to forecast")
    predict_p.add_argument("--out", type=Path, help="Write the forecast CSV here as well")
    predict_p.set_defaults(handler=cmd_predict)

    return parser


def _run(parser: CommandParser, argv: Sequence[str] | None) -> int:
    args = parser.parse_args(argv)
    if args.log_level or args.log_format:
        configure_logging(args.log_level, args.log_format)
    if args.command == "compare" and args.jobs < 1:
        raise ConfigError(f"--jobs must be >= 1, got {args.jobs}")
    return args.handler(args)


def main(argv: Sequence[str] | None = None) -> int:
    configure_logging()
    parser = build_parser()
    return CommandErrorMiddleware(_run)(parser, argv)


def main_entry() -> None:
    """Console-script entry point."""
    raise SystemExit(main())
