"""Project paths, pipeline settings and experiment configuration."""

from __future__ import annotations

import dataclasses
import os
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError

# Project paths
ROOT = Path(__file__).parent.parent.parent
SRC = ROOT / "src"
BLD = ROOT / "bld"
RESOURCES = ROOT / "resources"
EXPERIMENTS_DIR = RESOURCES / "experiments"

# Pipeline settings (pytask). Acceptance runs use 5 replications instead of 100.
SEED = int(os.getenv("HUBSIM_SEED", "2024"))
REPLICATIONS = int(os.getenv("HUBSIM_REPS", "5"))
CYCLES_OVERRIDE = os.getenv("HUBSIM_CYCLES")
JOBS = int(os.getenv("HUBSIM_JOBS", "1"))

PROTOCOL_NAMES = ("elevator", "proofs", "newscast", "phenix")

# Scenario registry - simple dictionaries
SCENARIOS = {
    "none": {
        "description": "No failures",
        "phenix_only": False,
    },
    "crash50": {
        "description": "Crash of a fraction of the nodes in the middle of the run",
        "phenix_only": False,
    },
    "churn": {
        "description": "Fraction of the nodes replaced at every cycle of the churn window",
        "phenix_only": False,
    },
    "hub_attack": {
        "description": "Removal of the highest in-degree nodes in the middle of the run",
        "phenix_only": False,
    },
    "phenix_growth": {
        "description": "Phenix network grown from a small seed, N(2,1) joins per cycle",
        "phenix_only": True,
    },
    "phenix_churn": {
        "description": "Phenix growth plus N(0,1) removals at every cycle",
        "phenix_only": True,
    },
}

NEWSCAST_MODES = ("push-pull", "push", "pull")


@dataclass(frozen=True)
class SimParams:
    """Simulation parameters. ``None`` defaults are resolved from ``c``."""

    n: int = 1000
    c: int = 20
    h: int | None = None
    l: int | None = None  # noqa: E741
    s: int | None = None
    gamma: int = 20
    tau: int = 10
    maxsize_buffer_backward: int = 100
    cycles: int = 1000
    seed: int = 42
    metric_period: int = 10
    phenix_initial_size: int = 20
    replacement_degree: int = 20
    churn_fraction: float = 0.1
    crash_fraction: float = 0.5
    attack_count: int | None = None
    sticky_hubs: bool = False
    newscast_mode: str = "push-pull"
    # Newscast view selection: oldest entries dropped, then sent entries.
    newscast_healer: int = 1
    newscast_swapper: int | None = None

    def __post_init__(self) -> None:
        half = max(1, self.c // 2)
        for name, default in (("h", half), ("l", half), ("s", half)):
            if getattr(self, name) is None:
                object.__setattr__(self, name, default)
        if self.attack_count is None:
            object.__setattr__(self, "attack_count", self.h)
        if self.newscast_swapper is None:
            object.__setattr__(self, "newscast_swapper", max(0, self.c // 2 - 1))
        self.validate()

    def validate(self) -> None:
        checks = [
            (0 < self.h <= self.c, "0 < h <= c"),
            (self.c < self.n, "c < n"),
            (0 < self.l <= self.c, "0 < l <= c"),
            (0 < self.s <= self.c, "0 < s <= c"),
            (self.metric_period >= 1, "metric_period >= 1"),
            (self.cycles >= 0, "cycles >= 0"),
            (self.gamma >= 1, "gamma >= 1"),
            (self.tau >= 1, "tau >= 1"),
            (self.maxsize_buffer_backward >= 1, "maxsize_buffer_backward >= 1"),
            (2 <= self.phenix_initial_size <= self.n, "2 <= phenix_initial_size <= n"),
            (self.replacement_degree >= 1, "replacement_degree >= 1"),
            (0.0 <= self.churn_fraction <= 1.0, "0 <= churn_fraction <= 1"),
            (0.0 < self.crash_fraction <= 1.0, "0 < crash_fraction <= 1"),
            (self.attack_count >= 0, "attack_count >= 0"),
            (self.newscast_mode in NEWSCAST_MODES, f"newscast_mode in {NEWSCAST_MODES}"),
            (self.newscast_healer >= 0, "newscast_healer >= 0"),
            (self.newscast_swapper >= 0, "newscast_swapper >= 0"),
        ]
        for ok, constraint in checks:
            if not ok:
                raise ConfigError(f"invalid parameters: violates {constraint} ({self!r})")


_PARAM_NAMES = tuple(f.name for f in dataclasses.fields(SimParams))
_FLOAT_PARAMS = {"churn_fraction", "crash_fraction"}
_BOOL_PARAMS = {"sticky_hubs"}
_STR_PARAMS = {"newscast_mode"}


@dataclass(frozen=True)
class ExperimentConfig:
    """One protocol under one scenario, replicated."""

    protocol: str = "elevator"
    scenario: str = "none"
    params: SimParams = field(default_factory=SimParams)
    replications: int = 100
    output_dir: Path = BLD / "runs"
    jobs: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "output_dir", Path(self.output_dir))
        if self.protocol not in PROTOCOL_NAMES:
            raise ConfigError(f"unknown protocol {self.protocol!r}, expected one of {PROTOCOL_NAMES}")
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}, expected one of {tuple(SCENARIOS)}")
        if SCENARIOS[self.scenario]["phenix_only"] and self.protocol != "phenix":
            raise ConfigError(f"scenario {self.scenario!r} requires the phenix protocol")
        if self.protocol == "phenix" and self.scenario == "churn":
            raise ConfigError("phenix churn uses scenario 'phenix_churn'")
        if self.replications < 1:
            raise ConfigError("replications must be >= 1")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")

    @property
    def name(self) -> str:
        return f"{self.protocol}_{self.scenario}"

    def with_overrides(self, **overrides: object) -> ExperimentConfig:
        """Copy with top-level or ``SimParams`` fields replaced; ``None`` values are ignored."""
        overrides = {k: v for k, v in overrides.items() if v is not None}
        param_changes = {k: overrides.pop(k) for k in list(overrides) if k in _PARAM_NAMES}
        unknown = set(overrides) - {f.name for f in dataclasses.fields(self)}
        if unknown:
            raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
        params = self.params
        if param_changes:
            # Re-derive the c-dependent defaults unless they were given explicitly.
            base = dataclasses.asdict(params)
            if "c" in param_changes:
                for derived in ("h", "l", "s", "attack_count", "newscast_swapper"):
                    base[derived] = None
            if "h" in param_changes and "attack_count" not in param_changes:
                base["attack_count"] = None
            base.update(param_changes)
            params = SimParams(**base)
        return dataclasses.replace(self, params=params, **overrides)

    def to_text(self) -> str:
        lines = ["# hubsim experiment configuration"]
        lines += [
            f"protocol={self.protocol}",
            f"scenario={self.scenario}",
            f"replications={self.replications}",
            f"output_dir={self.output_dir}",
            f"jobs={self.jobs}",
        ]
        for name in _PARAM_NAMES:
            value = getattr(self.params, name)
            if isinstance(value, bool):
                value = str(value).lower()
            lines.append(f"{name}={value}")
        return "\n".join(lines) + "\n"


def _coerce(key: str, raw: str) -> object:
    try:
        if key in _BOOL_PARAMS:
            lowered = raw.lower()
            if lowered in ("true", "1", "yes"):
                return True
            if lowered in ("false", "0", "no"):
                return False
            raise ValueError(raw)
        if key in _FLOAT_PARAMS:
            return float(raw)
        if key in _STR_PARAMS or key in ("protocol", "scenario"):
            return raw
        if key == "output_dir":
            return Path(raw)
        return int(raw)
    except ValueError as e:
        raise ConfigError(f"invalid value for {key!r}: {raw!r}") from e


def parse_config_text(text: str) -> dict[str, object]:
    """Parse flat ``key=value`` lines into typed values."""
    values: dict[str, object] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {line!r}")
        key, raw = (part.strip() for part in line.split("=", 1))
        values[key] = _coerce(key, raw)
    return values


def config_from_text(text: str) -> ExperimentConfig:
    return ExperimentConfig().with_overrides(**parse_config_text(text))


def load_config(
    path: Path | None = None,
    overrides: Mapping[str, object] | None = None,
    environ: Mapping[str, str] | None = None,
) -> ExperimentConfig:
    """Defaults < config file < overrides < ``HUBSIM_SEED``."""
    environ = os.environ if environ is None else environ
    config = ExperimentConfig()
    if path is not None:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigError(f"cannot read config file {path}: {e}") from e
        config = config_from_text(text)
    if overrides:
        config = config.with_overrides(**overrides)
    if "HUBSIM_SEED" in environ:
        config = config.with_overrides(seed=_coerce("seed", environ["HUBSIM_SEED"]))
    return config


def get_experiment_dirs(experiment_name: str) -> dict[str, Path]:
    """Get all build paths for an experiment of the pipeline.

    Args:
        experiment_name: ``<protocol>_<scenario>``

    Returns:
        Dictionary with keys: runs_dir, tables_dir
    """
    return {
        "runs_dir": BLD / "runs" / experiment_name,
        "tables_dir": BLD / "tables" / experiment_name,
    }


def create_experiment_dirs(experiment_name: str) -> None:
    """Create all necessary directories for an experiment."""
    for dir_path in get_experiment_dirs(experiment_name).values():
        dir_path.mkdir(parents=True, exist_ok=True)


def pipeline_config(path: Path) -> ExperimentConfig:
    """Config of a campaign context with the pipeline's env settings applied."""
    overrides: dict[str, object] = {"replications": REPLICATIONS, "seed": SEED, "jobs": JOBS}
    if CYCLES_OVERRIDE is not None:
        overrides["cycles"] = int(CYCLES_OVERRIDE)
    config = load_config(path, overrides, environ={})
    return config.with_overrides(output_dir=get_experiment_dirs(config.name)["tables_dir"])
