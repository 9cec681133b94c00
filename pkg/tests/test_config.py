from __future__ import annotations

from pathlib import Path

import pytest

from hubsim.config import (
    BLD,
    EXPERIMENTS_DIR,
    ExperimentConfig,
    SimParams,
    config_from_text,
    get_experiment_dirs,
    load_config,
    parse_config_text,
)
from hubsim.errors import ConfigError


def test_defaults_derive_from_c():
    params = SimParams()
    assert (params.n, params.c, params.h, params.l, params.s) == (1000, 20, 10, 10, 10)
    assert params.attack_count == params.h
    assert SimParams(n=50, c=7).h == 3


@pytest.mark.parametrize(
    ("overrides", "constraint"),
    [
        ({"h": 21}, "0 < h <= c"),
        ({"n": 20}, "c < n"),
        ({"l": 0}, "0 < l <= c"),
        ({"metric_period": 0}, "metric_period >= 1"),
        ({"newscast_mode": "gossip"}, "newscast_mode"),
    ],
)
def test_invalid_params_name_the_constraint(overrides, constraint):
    with pytest.raises(ConfigError, match=constraint):
        SimParams(**overrides)


def test_phenix_scenarios_need_phenix():
    with pytest.raises(ConfigError, match="requires the phenix protocol"):
        ExperimentConfig(protocol="elevator", scenario="phenix_growth")
    with pytest.raises(ConfigError, match="phenix_churn"):
        ExperimentConfig(protocol="phenix", scenario="churn")
    assert ExperimentConfig(protocol="phenix", scenario="crash50").name == "phenix_crash50"


def test_unknown_protocol_rejected():
    with pytest.raises(ConfigError, match="unknown protocol"):
        ExperimentConfig(protocol="cyclon")


def test_text_round_trip():
    config = ExperimentConfig(
        protocol="newscast",
        scenario="churn",
        params=SimParams(n=200, c=12, seed=9, sticky_hubs=True, churn_fraction=0.25),
        replications=3,
        output_dir=Path("out/x"),
    )
    assert config_from_text(config.to_text()) == config


def test_changing_c_rederives_hub_count():
    config = ExperimentConfig().with_overrides(c=8)
    assert config.params.h == 4
    assert config.params.attack_count == 4
    explicit = ExperimentConfig().with_overrides(c=8, h=2)
    assert explicit.params.h == 2


def test_parse_ignores_comments_and_blank_lines():
    values = parse_config_text("# header\n\nn = 300  # size\nsticky_hubs=yes\n")
    assert values == {"n": 300, "sticky_hubs": True}


@pytest.mark.parametrize("text", ["n 300", "n=three", "sticky_hubs=maybe"])
def test_parse_errors(text):
    with pytest.raises(ConfigError):
        parse_config_text(text)


def test_unknown_key_rejected():
    with pytest.raises(ConfigError, match="unknown configuration keys"):
        config_from_text("flavour=3\n")


def test_precedence_file_flags_env(tmp_path):
    path = tmp_path / "exp.cfg"
    path.write_text("seed=5\ncycles=40\n", encoding="utf-8")
    assert load_config(path, environ={}).params.seed == 5
    assert load_config(path, {"seed": 6}, environ={}).params.seed == 6
    config = load_config(path, {"seed": 6}, environ={"HUBSIM_SEED": "7"})
    assert config.params.seed == 7
    assert config.params.cycles == 40


def test_missing_file_is_config_error(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "absent.cfg", environ={})


def test_campaign_contexts_are_valid():
    files = sorted(EXPERIMENTS_DIR.glob("*.cfg"))
    assert len(files) == 16
    names = {load_config(f, environ={}).name for f in files}
    assert "elevator_none" in names
    assert "phenix_phenix_growth" in names
    assert {f.stem for f in files} == names


def test_experiment_dirs_live_under_bld():
    dirs = get_experiment_dirs("proofs_churn")
    assert set(dirs) == {"runs_dir", "tables_dir"}
    assert all(BLD in p.parents for p in dirs.values())
