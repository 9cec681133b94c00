"""Task for the closed-form probability tables."""
from pathlib import Path
from typing import Annotated

from pytask import Product, task

from ..analysis import analysis_table
from ..config import BLD, SEED
from ..experiment import write_csv
from ..rng import RngStream

analysis_dir = BLD / "analysis"

# (n, c, h, t): campaign size, and a small instance checked by Monte Carlo
ANALYSIS_CASES = {
    "campaign": (1000, 20, 10, 20),
    "small": (30, 4, 2, 1),
}

for case_name, (n, c, h, t) in ANALYSIS_CASES.items():

    @task(id=case_name)
    def task_analysis(
        n: int = n,
        c: int = c,
        h: int = h,
        t: int = t,
        produces: Annotated[Path, Product] = analysis_dir / f"analysis_{case_name}.csv",
    ) -> None:
        """Closed forms and, for small n, Monte Carlo estimates."""
        print(f"Analysis for n={n}, c={c}, h={h}, t={t}")
        table = analysis_table(n, c, h, t, RngStream.from_seed(SEED, purpose="analysis"))
        write_csv(table, produces)
