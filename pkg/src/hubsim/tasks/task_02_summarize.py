"""Task for assembling per-replication parquet files into the CSV tables."""
from pathlib import Path
from typing import Annotated

import pandas as pd
from pytask import Product, task

from ..config import get_experiment_dirs, pipeline_config
from ..experiment import RunTables, write_outputs
from .task_01_simulate import TABLES, experiment_files, replication_products

OUTPUT_FILES = (
    "metrics.csv",
    "indegree_final.csv",
    "outdegree_final.csv",
    "robustness.csv",
    "summary.csv",
    "config.cfg",
)


@task(is_generator=True)
def task_summarize() -> None:
    """Generate one summary task per campaign context."""
    for cfg_file in experiment_files():
        config = pipeline_config(cfg_file)
        dirs = get_experiment_dirs(config.name)
        depends = {
            f"{name}_{rep}": path
            for rep in range(config.replications)
            for name, path in replication_products(dirs["runs_dir"], rep).items()
        }

        @task(id=config.name)
        def summarize_experiment(
            cfg_path: Path = cfg_file,
            replication_files: dict[str, Path] = depends,
            produces: Annotated[dict[str, Path], Product] = {
                name: dirs["tables_dir"] / name for name in OUTPUT_FILES
            },
        ) -> None:
            """Concatenate replications, write CSVs and the per-cycle summary."""
            experiment = pipeline_config(cfg_path)
            parts = [
                RunTables(
                    **{
                        name: pd.read_parquet(replication_files[f"{name}_{rep}"])
                        for name in TABLES
                    }
                )
                for rep in range(experiment.replications)
            ]
            written = write_outputs(RunTables.concat(parts), experiment)
            print(f"[{experiment.name}] wrote {len(written)} files to {experiment.output_dir}")
