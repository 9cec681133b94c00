"""Command-line entry point: ``hubsim run | sweep-hubs | analyze | robustness``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import pandas as pd

from . import __version__
from .analysis import analysis_table
from .config import PROTOCOL_NAMES, SCENARIOS, ExperimentConfig, load_config
from .errors import ConfigError, HubsimError
from .experiment import SWEEP_H_VALUES, run, run_robustness, sweep_hubs, write_csv
from .rng import RngStream

logger = logging.getLogger("hubsim")

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2


def _add_experiment_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="key=value experiment file")
    parser.add_argument("--protocol", help=f"one of {', '.join(PROTOCOL_NAMES)}")
    parser.add_argument("--scenario", help=f"one of {', '.join(SCENARIOS)}")
    parser.add_argument("--n", type=int, help="network size")
    parser.add_argument("--c", type=int, help="cache capacity")
    parser.add_argument("--h", type=int, help="number of hub slots (elevator)")
    parser.add_argument("--cycles", type=int)
    parser.add_argument("--reps", type=int, dest="replications", help="replications")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--out", type=Path, dest="output_dir", help="output directory")
    parser.add_argument("--jobs", type=int, help="parallel replications")
    parser.add_argument("--metric-period", type=int, dest="metric_period")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hubsim", description="Simulate hub sampling and peer sampling overlays."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="warnings only")
    sub = parser.add_subparsers(dest="command", required=True)

    run_parser = sub.add_parser("run", help="replicated simulation with metric time series")
    _add_experiment_arguments(run_parser)

    sweep = sub.add_parser("sweep-hubs", help="final in-degree histograms for several h")
    _add_experiment_arguments(sweep)
    sweep.add_argument(
        "--h-values", type=int, nargs="+", default=list(SWEEP_H_VALUES), dest="h_values"
    )

    robustness = sub.add_parser("robustness", help="node-removal sweeps on the final overlay")
    _add_experiment_arguments(robustness)

    analyze = sub.add_parser("analyze", help="closed-form probabilities and Monte Carlo checks")
    analyze.add_argument("--n", type=int, default=1000)
    analyze.add_argument("--c", type=int, default=20)
    analyze.add_argument("--h", type=int, default=10)
    analyze.add_argument("--t", type=int, default=20, help="number of rounds")
    analyze.add_argument("--trials", type=int, default=100_000)
    analyze.add_argument("--seed", type=int, default=42)
    analyze.add_argument("--out", type=Path, dest="output_dir", help="also write analysis.csv")
    return parser


def _experiment_config(args: argparse.Namespace) -> ExperimentConfig:
    overrides = {
        key: getattr(args, key)
        for key in (
            "protocol",
            "scenario",
            "n",
            "c",
            "h",
            "cycles",
            "replications",
            "seed",
            "output_dir",
            "jobs",
            "metric_period",
        )
    }
    return load_config(args.config, overrides)


def _configure_logging(args: argparse.Namespace) -> None:
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(
        level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s", stream=sys.stderr
    )


def _dispatch(args: argparse.Namespace) -> None:
    if args.command == "analyze":
        table = analysis_table(
            args.n, args.c, args.h, args.t, RngStream.from_seed(args.seed, purpose="analysis"), args.trials
        )
        with pd.option_context("display.max_columns", None, "display.width", 160):
            print(table.to_string(index=False))
        if args.output_dir is not None:
            write_csv(table, args.output_dir / "analysis.csv")
        return

    config = _experiment_config(args)
    if args.command == "run":
        for path in run(config):
            logger.info("wrote %s", path)
    elif args.command == "sweep-hubs":
        table = sweep_hubs(config, tuple(args.h_values))
        logger.info("wrote %s", write_csv(table, config.output_dir / "sweep_hubs_indegree.csv"))
    elif args.command == "robustness":
        logger.info("wrote %s", write_csv(run_robustness(config), config.output_dir / "robustness.csv"))


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args)
    try:
        _dispatch(args)
    except ConfigError as e:
        print(f"hubsim: configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (HubsimError, OSError) as e:
        print(f"hubsim: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
