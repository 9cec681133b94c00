"""Task for the Elevator hub-count sweep."""
from pathlib import Path
from typing import Annotated

from pytask import Product

from ..config import BLD, EXPERIMENTS_DIR, pipeline_config
from ..experiment import SWEEP_H_VALUES, sweep_hubs, write_csv

SWEEP_CONFIG = EXPERIMENTS_DIR / "elevator_none.cfg"
sweep_dir = BLD / "sweeps"


def task_sweep_hubs(
    cfg_path: Path = SWEEP_CONFIG,
    produces: Annotated[Path, Product] = sweep_dir / "sweep_hubs_indegree.csv",
) -> None:
    """Final in-degree histograms for h in 5, 10, 15, 20."""
    config = pipeline_config(cfg_path)
    print(f"Sweeping h over {SWEEP_H_VALUES} ({config.replications} replications each)")
    write_csv(sweep_hubs(config, SWEEP_H_VALUES), produces)
    print(f"Hub sweep written to {produces}")
