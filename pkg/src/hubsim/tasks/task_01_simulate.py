"""Task for running every replication of every campaign context."""
import os
from pathlib import Path
from typing import Annotated

from pytask import Product, task

from ..config import EXPERIMENTS_DIR, create_experiment_dirs, get_experiment_dirs, pipeline_config
from ..experiment import run_replication

TABLES = ("metrics", "indegree", "outdegree", "robustness")


def experiment_files() -> list[Path]:
    """Campaign contexts, limited by MAX_EXPERIMENTS when set."""
    files = sorted(EXPERIMENTS_DIR.glob("*.cfg"))
    max_experiments = os.environ.get("MAX_EXPERIMENTS")
    if max_experiments is not None:
        files = files[: int(max_experiments)]
    return files


def replication_products(runs_dir: Path, replication: int) -> dict[str, Path]:
    return {name: runs_dir / f"rep_{replication:03d}_{name}.parquet" for name in TABLES}


@task(is_generator=True)
def task_simulate() -> None:
    """Generate one simulation task per (context, replication)."""
    for cfg_file in experiment_files():
        config = pipeline_config(cfg_file)
        create_experiment_dirs(config.name)
        runs_dir = get_experiment_dirs(config.name)["runs_dir"]

        for replication in range(config.replications):

            # Capture variables in default arguments to avoid closure issues
            @task(id=f"{config.name}-{replication}")
            def simulate_replication(
                cfg_path: Path = cfg_file,
                rep: int = replication,
                produces: Annotated[dict[str, Path], Product] = replication_products(
                    runs_dir, replication
                ),
            ) -> None:
                """Run one replication and store its tables as parquet."""
                experiment = pipeline_config(cfg_path)
                print(f"[{experiment.name}] replication {rep}: {experiment.params.cycles} cycles")
                tables = run_replication(experiment, rep)
                for name, path in produces.items():
                    getattr(tables, name).to_parquet(path, index=False)
                print(f"[{experiment.name}] replication {rep} done")
