"""Closed-form probabilities of preferential-link creation and hub maintenance.

Both quantities get astronomically small for realistic sizes, so they are
carried as base-10 logarithms and only turned into floats on demand. Small
instances are cross-checked by Monte Carlo simulation.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
import pandas as pd

from .errors import DomainError
from .metrics import GraphSnapshot
from .protocols import NodeId
from .rng import RngStream

logger = logging.getLogger(__name__)

LN10 = math.log(10.0)

# Upper bound on random keys held in memory by one Monte Carlo chunk.
_CHUNK_KEYS = 2_000_000


@dataclass(frozen=True)
class LogProbability:
    """A probability stored as ``log10(p)``; ``-inf`` encodes exactly 0."""

    log10: float

    @property
    def value(self) -> float:
        """``p`` as a float (underflows to 0.0 below ~1e-308)."""
        return 10.0**self.log10 if math.isfinite(self.log10) else 0.0

    def mantissa_exponent(self) -> tuple[float, int]:
        """``(m, e)`` with ``p = m * 10**e`` and ``1 <= m < 10``."""
        if not math.isfinite(self.log10):
            return 0.0, 0
        exponent = math.floor(self.log10)
        return 10.0 ** (self.log10 - exponent), exponent

    def __str__(self) -> str:
        mantissa, exponent = self.mantissa_exponent()
        return f"{mantissa:.4f}e{exponent:+d}"


@dataclass(frozen=True)
class HubMaintenance:
    """``P[S maintained] = 1 - complement`` for one round."""

    probability: float
    complement: LogProbability


def _check_domain(ok: bool, message: str) -> None:
    if not ok:
        raise DomainError(message)


def p_no_preferential_links(n: int, c: int, t: int = 1) -> LogProbability:
    """``((1 - c/n) ** C(c, 2)) ** t``: no two neighbors share a cache entry over ``t`` rounds."""
    _check_domain(n > c >= 2, f"need n > c >= 2, got n={n}, c={c}")
    _check_domain(t >= 1, f"need t >= 1, got t={t}")
    per_pair = math.log1p(-c / n) / LN10
    return LogProbability(t * math.comb(c, 2) * per_pair)


def p_hub_set_maintained(n: int, c: int, h: int) -> HubMaintenance:
    """``1 - h/(h+1) * ((c-h)/n) ** c``; exactly 1 when ``h == c``."""
    _check_domain(n > c >= h >= 1, f"need n > c >= h >= 1, got n={n}, c={c}, h={h}")
    if h == c:
        return HubMaintenance(probability=1.0, complement=LogProbability(-math.inf))
    log10 = math.log10(h / (h + 1)) + c * math.log10((c - h) / n)
    complement = LogProbability(log10)
    return HubMaintenance(probability=-math.expm1(log10 * LN10), complement=complement)


@dataclass(frozen=True)
class MonteCarloEstimate:
    successes: int
    trials: int

    @property
    def mean(self) -> float:
        return self.successes / self.trials

    @property
    def stderr(self) -> float:
        return math.sqrt(self.mean * (1.0 - self.mean) / self.trials)

    def confidence_interval(self, z: float = 1.96) -> tuple[float, float]:
        return self.mean - z * self.stderr, self.mean + z * self.stderr

    def agrees_with(self, expected: float, sigmas: float = 3.0) -> bool:
        """Whether the estimate lies within ``sigmas`` binomial standard deviations of ``expected``."""
        sigma = math.sqrt(expected * (1.0 - expected) / self.trials)
        return abs(self.mean - expected) <= sigmas * sigma + 1.0 / self.trials


def _chunks(trials: int, keys_per_trial: int):
    size = max(1, _CHUNK_KEYS // max(1, keys_per_trial))
    for start in range(0, trials, size):
        yield min(size, trials - start)


def _target_in_subset(keys: np.ndarray, k: int) -> np.ndarray:
    """Node 0 belongs to the ``k`` nodes with the smallest keys (a uniform ``k``-subset)."""
    rank_of_target = (keys < keys[..., :1]).sum(axis=-1)
    return rank_of_target < k


def mc_no_preferential_links(
    n: int,
    c: int,
    trials: int,
    rng: RngStream,
    model: Literal["pairwise", "graph"] = "pairwise",
) -> MonteCarloEstimate:
    """Single-round estimate of the no-preferential-link event.

    ``pairwise`` samples the independence model behind the closed form: each
    of the ``C(c, 2)`` neighbor pairs misses a fixed peer with probability
    ``1 - c/n``. ``graph`` samples the exact event on a random c-out graph: no
    id appears twice among the caches of node 0's neighbors.
    """
    _check_domain(n > c >= 2, f"need n > c >= 2, got n={n}, c={c}")
    _check_domain(trials >= 1, "need at least one trial")
    gen = rng.generator
    successes = 0
    if model == "pairwise":
        pairs = math.comb(c, 2)
        for size in _chunks(trials, pairs * n):
            keys = gen.random((size, pairs, n))
            hit = _target_in_subset(keys, c).any(axis=1)
            successes += int((~hit).sum())
    elif model == "graph":
        # Neighbors of node 0 are relabelled 1..c; the event is label-invariant.
        neighbors = np.arange(1, c + 1)
        for size in _chunks(trials, c * n):
            keys = gen.random((size, c, n))
            keys[:, np.arange(c), neighbors] = np.inf
            caches = np.argpartition(keys, c - 1, axis=2)[:, :, :c].reshape(size, c * c)
            caches = np.sort(np.where(caches == 0, -np.arange(1, c * c + 1), caches), axis=1)
            shared = (np.diff(caches, axis=1) == 0).any(axis=1)
            successes += int((~shared).sum())
    else:
        raise DomainError(f"unknown Monte Carlo model {model!r}")
    return MonteCarloEstimate(successes=successes, trials=trials)


def mc_hub_complement(n: int, c: int, h: int, trials: int, rng: RngStream) -> MonteCarloEstimate:
    """Estimate ``1 - P[S maintained]`` by direct sampling.

    Each of the ``c`` neighbors draws ``c - h`` random links; the configuration
    is lost when all of them share one peer and that peer then wins the
    tie-break against the ``h`` hubs.
    """
    _check_domain(n > c >= h >= 1, f"need n > c >= h >= 1, got n={n}, c={c}, h={h}")
    _check_domain(trials >= 1, "need at least one trial")
    gen = rng.generator
    successes = 0
    for size in _chunks(trials, c * n):
        keys = gen.random((size, c, n))
        shared = _target_in_subset(keys, c - h).all(axis=1)
        wins_tie = gen.random(size) < h / (h + 1)
        successes += int((shared & wins_tie).sum())
    return MonteCarloEstimate(successes=successes, trials=trials)


@dataclass(frozen=True)
class HubConfiguration:
    hub_ids: frozenset[NodeId]
    cycle: int = 0

    def __len__(self) -> int:
        return len(self.hub_ids)


def detect_hub_configuration(snap: GraphSnapshot, h: int) -> HubConfiguration | None:
    """The hub set iff exactly ``h`` alive nodes have in-degree ``|alive| - 1``."""
    if snap.node_count < 2:
        return None
    hubs = snap.ids[snap.in_degrees == snap.node_count - 1]
    if len(hubs) != h:
        return None
    return HubConfiguration(hub_ids=frozenset(int(x) for x in hubs), cycle=snap.cycle)


def analysis_table(
    n: int,
    c: int,
    h: int,
    t: int,
    rng: RngStream,
    trials: int = 100_000,
    monte_carlo_limit: int = 50,
) -> pd.DataFrame:
    """Closed forms, plus Monte Carlo estimates when ``n <= monte_carlo_limit``."""
    single = p_no_preferential_links(n, c, 1)
    rounds = p_no_preferential_links(n, c, t)
    hub = p_hub_set_maintained(n, c, h)
    rows = [
        {"quantity": "p_no_preferential_links", "t": 1, "log10": single.log10, "value": single.value},
        {"quantity": "p_no_preferential_links", "t": t, "log10": rounds.log10, "value": rounds.value},
        {
            "quantity": "p_hub_set_complement",
            "t": 1,
            "log10": hub.complement.log10,
            "value": hub.complement.value,
        },
        {"quantity": "p_hub_set_maintained", "t": 1, "log10": math.log10(hub.probability), "value": hub.probability},
    ]
    table = pd.DataFrame(rows).drop_duplicates(subset=["quantity", "t"]).reset_index(drop=True)
    table["scientific"] = [str(LogProbability(x)) for x in table["log10"]]
    for column in ("mc_model", "mc_mean", "mc_ci_low", "mc_ci_high", "mc_agrees"):
        table[column] = None

    if n <= monte_carlo_limit:
        logger.info("running Monte Carlo checks with %d trials", trials)
        estimates = {
            ("p_no_preferential_links", "pairwise"): mc_no_preferential_links(n, c, trials, rng),
            ("p_no_preferential_links", "graph"): mc_no_preferential_links(n, c, trials, rng, "graph"),
            ("p_hub_set_complement", "direct"): mc_hub_complement(n, c, h, trials, rng),
        }
        extra = []
        for (quantity, model), estimate in estimates.items():
            base = table[(table["quantity"] == quantity) & (table["t"] == 1)].iloc[0].to_dict()
            low, high = estimate.confidence_interval()
            base.update(
                mc_model=model,
                mc_mean=estimate.mean,
                mc_ci_low=low,
                mc_ci_high=high,
                # The graph model is the exact event, not the approximation; no agreement claim.
                mc_agrees=None if model == "graph" else estimate.agrees_with(base["value"]),
            )
            extra.append(base)
        table = pd.concat([table, pd.DataFrame(extra)], ignore_index=True)
    return table
