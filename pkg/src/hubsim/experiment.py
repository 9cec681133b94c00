"""Replicated experiment runs and their CSV tables."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from pathlib import Path

import pandas as pd

from .config import ExperimentConfig
from .errors import ConfigError
from .metrics import (
    GraphSnapshot,
    compute_metrics,
    degree_distributions,
    robustness_sweep,
    take_snapshot,
)
from .overlay import OverlayNetwork, init_k_out, init_phenix_seed, step_cycle
from .protocols import ProtocolKind
from .rng import RngStream, spawn_streams
from .scenarios import apply_event, build_plan

logger = logging.getLogger(__name__)

METRIC_COLUMNS = ["replication", "cycle", "metric", "value"]
DEGREE_COLUMNS = ["replication", "degree", "count"]
ROBUSTNESS_COLUMNS = ["replication", "order", "component", "removed", "outside"]
SUMMARY_COLUMNS = ["cycle", "metric", "mean", "std", "count"]
SWEEP_COLUMNS = ["h", *DEGREE_COLUMNS]

SWEEP_H_VALUES = (5, 10, 15, 20)

CSV_OPTIONS = {"index": False, "float_format": "%.10g", "lineterminator": "\n", "na_rep": ""}


@dataclass
class RunTables:
    """Long-format tables of one or more replications."""

    metrics: pd.DataFrame
    indegree: pd.DataFrame
    outdegree: pd.DataFrame
    robustness: pd.DataFrame

    @classmethod
    def concat(cls, parts: list[RunTables]) -> RunTables:
        def stack(name: str, keys: list[str]) -> pd.DataFrame:
            frames = [getattr(p, name) for p in parts]
            table = pd.concat(frames, ignore_index=True) if frames else pd.DataFrame()
            return table.sort_values(keys, kind="stable").reset_index(drop=True) if len(table) else table

        return cls(
            metrics=stack("metrics", ["replication", "cycle", "metric"]),
            indegree=stack("indegree", ["replication", "degree"]),
            outdegree=stack("outdegree", ["replication", "degree"]),
            robustness=stack("robustness", ["replication", "order", "component", "removed"]),
        )


def initial_network(config: ExperimentConfig, streams: dict[str, RngStream]) -> OverlayNetwork:
    if config.protocol == ProtocolKind.PHENIX:
        return init_phenix_seed(config.params, streams)
    return init_k_out(config.params, config.protocol, streams)


def simulate(
    config: ExperimentConfig, replication: int, collect_metrics: bool = True
) -> tuple[OverlayNetwork, list[tuple[int, str, float]]]:
    """Run one replication; returns the final network and ``(cycle, metric, value)`` rows."""
    params = config.params
    streams = spawn_streams(params.seed, replication)
    net = initial_network(config, streams)
    schedule = build_plan(config.protocol, config.scenario, params).by_cycle()

    rows: list[tuple[int, str, float]] = []

    def record() -> None:
        if collect_metrics:
            snapshot = compute_metrics(take_snapshot(net))
            rows.extend((net.cycle, name, value) for name, value in snapshot.scalar_rows())
            logger.debug("cycle %d: %s", net.cycle, dict(snapshot.scalar_rows()))

    record()
    for t in range(1, params.cycles + 1):
        for event in schedule.get(t, ()):
            logger.debug("replication %d cycle %d: %s", replication, t, event.kind)
            apply_event(net, event)
        step_cycle(net)
        if t % params.metric_period == 0:
            record()
    return net, rows


def _degree_table(histogram: dict[int, int], replication: int) -> pd.DataFrame:
    return pd.DataFrame(
        [(replication, degree, count) for degree, count in histogram.items()],
        columns=DEGREE_COLUMNS,
    )


def robustness_table(snap: GraphSnapshot, rng: RngStream, replication: int) -> pd.DataFrame:
    """Random and targeted sweeps, each on weak and strong components."""
    rows = [
        (replication, order, component, removed, outside)
        for order in ("random", "targeted")
        for component in ("weak", "strong")
        for removed, outside in robustness_sweep(snap, order, component, rng)
    ]
    return pd.DataFrame(rows, columns=ROBUSTNESS_COLUMNS)


def run_replication(
    config: ExperimentConfig,
    replication: int,
    collect_metrics: bool = True,
    robustness: bool = True,
) -> RunTables:
    logger.info("%s: replication %d started", config.name, replication)
    net, rows = simulate(config, replication, collect_metrics)
    final = take_snapshot(net)
    in_hist, out_hist = degree_distributions(final)
    if robustness:
        sweeps = robustness_table(final, net.streams["metrics"], replication)
    else:
        sweeps = pd.DataFrame(columns=ROBUSTNESS_COLUMNS)
    metrics = pd.DataFrame([(replication, *row) for row in rows], columns=METRIC_COLUMNS)
    logger.info("%s: replication %d finished, %d alive", config.name, replication, final.node_count)
    return RunTables(
        metrics=metrics,
        indegree=_degree_table(in_hist, replication),
        outdegree=_degree_table(out_hist, replication),
        robustness=sweeps,
    )


def run_experiment(
    config: ExperimentConfig, collect_metrics: bool = True, robustness: bool = True
) -> RunTables:
    """All replications of ``config``, in parallel when ``config.jobs > 1``.

    Every replication owns its random streams, so the tables do not depend on
    the number of jobs.
    """
    worker = partial(
        run_replication, config, collect_metrics=collect_metrics, robustness=robustness
    )
    replications = range(config.replications)
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            parts = list(pool.map(worker, replications))
    else:
        parts = [worker(r) for r in replications]
    return RunTables.concat(parts)


def summarize(metrics: pd.DataFrame) -> pd.DataFrame:
    """Per-cycle mean, sample std (ddof=1) and count across replications."""
    if metrics.empty:
        return pd.DataFrame(columns=SUMMARY_COLUMNS)
    summary = (
        metrics.groupby(["cycle", "metric"], sort=True)["value"]
        .agg(mean="mean", std=lambda v: v.std(ddof=1), count="count")
        .reset_index()
    )
    return summary[SUMMARY_COLUMNS]


def write_csv(table: pd.DataFrame, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    table.to_csv(path, **CSV_OPTIONS)
    return path


def write_outputs(tables: RunTables, config: ExperimentConfig, output_dir: Path | None = None) -> list[Path]:
    out = Path(output_dir or config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = [
        write_csv(tables.metrics, out / "metrics.csv"),
        write_csv(tables.indegree, out / "indegree_final.csv"),
        write_csv(tables.outdegree, out / "outdegree_final.csv"),
        write_csv(tables.robustness, out / "robustness.csv"),
        write_csv(summarize(tables.metrics), out / "summary.csv"),
    ]
    config_path = out / "config.cfg"
    config_path.write_text(config.to_text(), encoding="utf-8")
    written.append(config_path)
    return written


def run(config: ExperimentConfig) -> list[Path]:
    """Run every replication and write all tables to ``config.output_dir``."""
    return write_outputs(run_experiment(config), config)


def sweep_hubs(config: ExperimentConfig, h_values: tuple[int, ...] = SWEEP_H_VALUES) -> pd.DataFrame:
    """Final in-degree histograms of Elevator runs for several hub counts."""
    if config.protocol != ProtocolKind.ELEVATOR:
        raise ConfigError(f"hub sweep requires the elevator protocol, not {config.protocol!r}")
    frames = []
    for h in h_values:
        logger.info("hub sweep: h=%d", h)
        tables = run_experiment(config.with_overrides(h=h), collect_metrics=False, robustness=False)
        frames.append(tables.indegree.assign(h=h)[SWEEP_COLUMNS])
    return pd.concat(frames, ignore_index=True).sort_values(["h", "replication", "degree"]).reset_index(
        drop=True
    )


def run_robustness(config: ExperimentConfig) -> pd.DataFrame:
    """Robustness sweeps on the final overlay of every replication."""
    return run_experiment(config, collect_metrics=False, robustness=True).robustness
