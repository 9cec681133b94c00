from __future__ import annotations

import math
from fractions import Fraction

import pytest

from hubsim.analysis import (
    LogProbability,
    analysis_table,
    detect_hub_configuration,
    mc_hub_complement,
    mc_no_preferential_links,
    p_hub_set_maintained,
    p_no_preferential_links,
)
from hubsim.config import SimParams
from hubsim.errors import DomainError
from hubsim.metrics import GraphSnapshot, take_snapshot
from hubsim.overlay import init_k_out
from hubsim.rng import RngStream


def _rng(seed: int = 0) -> RngStream:
    return RngStream.from_seed(seed, purpose="analysis")


def test_no_preferential_links_single_round():
    p = p_no_preferential_links(1000, 20, 1)
    assert p.value == pytest.approx(0.98**190, rel=1e-12)
    # The closed form gives 0.0215, a little below the often quoted 2.5%.
    assert abs(p.value - 0.0215) < 5e-4


def test_no_preferential_links_twenty_rounds():
    p = p_no_preferential_links(1000, 20, 20)
    assert -35 <= p.log10 <= -33
    mantissa, exponent = p.mantissa_exponent()
    assert 1 <= mantissa < 10
    assert exponent == math.floor(p.log10)


def test_hub_set_complement_at_campaign_scale():
    hub = p_hub_set_maintained(1000, 20, 10)
    assert hub.complement.log10 == pytest.approx(math.log10(10 / 11) - 40, abs=1e-9)
    assert abs(hub.complement.log10 + 40) < 1
    assert hub.probability == 1.0


def test_all_slots_hubs_is_certain():
    hub = p_hub_set_maintained(100, 20, 20)
    assert hub.probability == 1.0
    assert hub.complement.value == 0.0
    assert hub.complement.mantissa_exponent() == (0.0, 0)


@pytest.mark.parametrize(("n", "c", "t"), [(20, 20, 1), (10, 1, 1), (30, 4, 0)])
def test_no_preferential_links_domain(n, c, t):
    with pytest.raises(DomainError):
        p_no_preferential_links(n, c, t)


@pytest.mark.parametrize(("n", "c", "h"), [(20, 20, 5), (30, 4, 5), (30, 4, 0)])
def test_hub_maintenance_domain(n, c, h):
    with pytest.raises(DomainError):
        p_hub_set_maintained(n, c, h)


def test_minimal_network_size():
    assert 0 < p_no_preferential_links(21, 20, 1).value < 1
    assert 0 < p_hub_set_maintained(21, 20, 10).probability <= 1


@pytest.mark.parametrize(("n", "c", "t"), [(10, 2, 1), (12, 3, 2), (30, 4, 3), (50, 6, 1)])
def test_log_space_matches_exact_rationals(n, c, t):
    exact = Fraction(n - c, n) ** (math.comb(c, 2) * t)
    assert p_no_preferential_links(n, c, t).value == pytest.approx(float(exact), rel=1e-12)


@pytest.mark.parametrize(("n", "c", "h"), [(12, 4, 2), (30, 5, 1), (50, 10, 7)])
def test_hub_complement_matches_exact_rationals(n, c, h):
    exact = Fraction(h, h + 1) * Fraction(c - h, n) ** c
    hub = p_hub_set_maintained(n, c, h)
    assert hub.complement.value == pytest.approx(float(exact), rel=1e-12)
    assert hub.probability == pytest.approx(float(1 - exact), rel=1e-12)


def test_closed_forms_are_monotone():
    by_t = [p_no_preferential_links(100, 6, t).log10 for t in range(1, 6)]
    by_c = [p_no_preferential_links(100, c, 1).log10 for c in range(2, 12)]
    by_n = [p_hub_set_maintained(n, 8, 3).complement.log10 for n in range(20, 200, 20)]
    assert by_t == sorted(by_t, reverse=True)
    assert by_c == sorted(by_c, reverse=True)
    assert by_n == sorted(by_n, reverse=True)


def test_pairwise_monte_carlo_single_pair():
    estimate = mc_no_preferential_links(30, 2, 100_000, _rng(1))
    assert estimate.agrees_with(p_no_preferential_links(30, 2, 1).value)


def test_pairwise_monte_carlo_small_instance():
    estimate = mc_no_preferential_links(30, 4, 100_000, _rng(2))
    assert estimate.agrees_with(p_no_preferential_links(30, 4, 1).value)
    low, high = estimate.confidence_interval()
    assert low < estimate.mean < high


def test_graph_model_is_a_probability():
    estimate = mc_no_preferential_links(30, 4, 20_000, _rng(3), model="graph")
    assert 0.0 <= estimate.mean <= 1.0
    # Neighbors of a node with only two peers can never repeat an id.
    assert mc_no_preferential_links(3, 2, 1000, _rng(3), model="graph").mean == 1.0


def _two_out_no_shared_peer(n: int) -> float:
    """Exact chance that two neighbors of node 0 in a random 2-out graph share no peer but 0."""
    subsets = math.comb(n - 1, 2)
    # a = peers of the first neighbor that the second neighbor could also pick
    weights = {2: math.comb(n - 3, 2), 1: 2 * (n - 3), 0: 1}
    return sum(w / subsets * math.comb(n - 1 - a, 2) / subsets for a, w in weights.items())


@pytest.mark.parametrize("n", [40, 200])
def test_graph_model_on_two_out_graphs(n):
    estimate = mc_no_preferential_links(n, 2, 200_000, _rng(n), model="graph")
    exact = _two_out_no_shared_peer(n)
    assert estimate.agrees_with(exact)
    # A pair misses a fixed peer in the closed form, but may collide on any of
    # its draws in the graph, so the graph complement is close to twice as large.
    closed = 1.0 - p_no_preferential_links(n, 2, 1).value
    assert closed < 1.0 - estimate.mean < 2.5 * closed


def test_unknown_monte_carlo_model():
    with pytest.raises(DomainError):
        mc_no_preferential_links(30, 4, 10, _rng(), model="exact")


def test_hub_complement_monte_carlo():
    expected = p_hub_set_maintained(12, 4, 2).complement.value
    estimate = mc_hub_complement(12, 4, 2, 1_000_000, _rng(4))
    assert estimate.agrees_with(expected)


def test_log_probability_formatting():
    p = LogProbability(-33.25)
    mantissa, exponent = p.mantissa_exponent()
    assert exponent == -34
    assert mantissa == pytest.approx(10**0.75)
    assert str(p).endswith("e-34")


def test_detects_multi_star_hubs():
    hubs = [2, 5, 7]
    others = [0, 1, 3, 4, 6]
    edges = [(u, h) for u in others for h in hubs] + [(h, g) for h in hubs for g in hubs if h != g]
    snap = GraphSnapshot.from_edges(others + hubs, edges, cycle=3)
    config = detect_hub_configuration(snap, 3)
    assert config is not None and config.hub_ids == frozenset(hubs)
    assert detect_hub_configuration(snap, 2) is None


def test_random_graph_has_no_hub_configuration():
    snap = take_snapshot(init_k_out(SimParams(n=200, c=2, h=1, seed=5)))
    assert snap.in_degrees.max() < snap.node_count - 1
    assert detect_hub_configuration(snap, 10) is None


def test_analysis_table_campaign_scale():
    table = analysis_table(1000, 20, 10, 20, _rng())
    assert table["mc_model"].isna().all()
    rows = {(q, t): row for q, t, row in zip(table["quantity"], table["t"], table.itertuples())}
    assert abs(rows[("p_no_preferential_links", 1)].value - 0.0215) < 5e-4
    assert -35 <= rows[("p_no_preferential_links", 20)].log10 <= -33
    assert abs(rows[("p_hub_set_complement", 1)].log10 + 40) < 1


def test_analysis_table_small_instance_runs_monte_carlo():
    table = analysis_table(30, 4, 2, 1, _rng(), trials=50_000)
    checked = table[table["mc_model"].isin(["pairwise", "direct"])]
    assert len(checked) == 2
    assert checked["mc_agrees"].all()
    assert (table["mc_model"] == "graph").sum() == 1
