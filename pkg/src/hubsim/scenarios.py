"""Failure and growth scenarios applied between cycles.

All scenario randomness is drawn from the ``scenario`` stream, so protocol
trajectories with the same seed stay comparable across scenarios.
"""

from __future__ import annotations

import logging
import math
from collections import defaultdict
from dataclasses import dataclass
from enum import StrEnum

import numpy as np

from .config import SimParams
from .metrics import take_snapshot
from .overlay import OverlayNetwork
from .protocols import NodeId, ProtocolKind, phenix_join
from .rng import RngStream

logger = logging.getLogger(__name__)

GROWTH_MEAN, GROWTH_STD = 2.0, 1.0
REMOVAL_MEAN, REMOVAL_STD = 0.0, 1.0


class EventKind(StrEnum):
    CRASH = "crash"
    CHURN = "churn"
    HUB_ATTACK = "hub_attack"
    GROW = "grow"
    PHENIX_CHURN = "phenix_churn"


@dataclass(frozen=True)
class ScenarioEvent:
    cycle: int
    kind: EventKind
    fraction: float = 0.0
    count: int = 0
    replacement_degree: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.fraction <= 1.0:
            raise ValueError(f"fraction must be in [0, 1], got {self.fraction}")
        if self.count < 0:
            raise ValueError(f"count must be >= 0, got {self.count}")


@dataclass(frozen=True)
class ScenarioPlan:
    name: str
    events: tuple[ScenarioEvent, ...] = ()

    def by_cycle(self) -> dict[int, list[ScenarioEvent]]:
        grouped: dict[int, list[ScenarioEvent]] = defaultdict(list)
        for event in self.events:
            grouped[event.cycle].append(event)
        return dict(grouped)


def build_plan(protocol: str, scenario: str, params: SimParams) -> ScenarioPlan:
    """Event schedule for a protocol under a scenario.

    Crash and hub attack hit at ``cycles // 2``; churn runs over
    ``[cycles // 4, 3 * cycles // 4)``. A Phenix network always grows; its
    churn removes nodes at every cycle.
    """
    cycles = params.cycles
    middle = cycles // 2
    events: list[ScenarioEvent] = []
    if protocol == ProtocolKind.PHENIX:
        kind = EventKind.PHENIX_CHURN if scenario == "phenix_churn" else EventKind.GROW
        events += [ScenarioEvent(t, kind) for t in range(1, cycles + 1)]
    if scenario == "crash50":
        events.append(ScenarioEvent(middle, EventKind.CRASH, fraction=params.crash_fraction))
    elif scenario == "churn":
        events += [
            ScenarioEvent(
                t,
                EventKind.CHURN,
                fraction=params.churn_fraction,
                replacement_degree=params.replacement_degree,
            )
            for t in range(cycles // 4, 3 * cycles // 4)
        ]
    elif scenario == "hub_attack":
        events.append(ScenarioEvent(middle, EventKind.HUB_ATTACK, count=params.attack_count))
    in_run = [e for e in events if 1 <= e.cycle <= cycles]
    # Stable: growth stays ahead of a crash or attack scheduled on the same cycle.
    return ScenarioPlan(name=scenario, events=tuple(sorted(in_run, key=lambda e: e.cycle)))


def _scenario_rng(net: OverlayNetwork) -> RngStream:
    return net.streams["scenario"]


def _kill_random(net: OverlayNetwork, count: int) -> list[NodeId]:
    victims = _scenario_rng(net).sample(net.alive_ids(), count)
    for node in victims:
        net.kill(node)
    return victims


def apply_crash(net: OverlayNetwork, fraction: float) -> OverlayNetwork:
    """Kill ``floor(fraction * |alive|)`` uniformly chosen nodes."""
    victims = _kill_random(net, math.floor(fraction * len(net.alive)))
    logger.info("crash removed %d nodes, %d alive", len(victims), len(net.alive))
    return net


def apply_churn_tick(net: OverlayNetwork, fraction: float, replacement_degree: int) -> OverlayNetwork:
    """Replace ``floor(fraction * |alive|)`` random nodes by fresh ones.

    Newcomers bootstrap with ``replacement_degree`` peers (20 for the campaign),
    capped at ``c`` so no cache starts over capacity.
    """
    if not net.alive:
        return net
    victims = _kill_random(net, math.floor(fraction * len(net.alive)))
    survivors = net.alive_ids()
    degree = min(replacement_degree, net.params.c, len(survivors))
    rng = _scenario_rng(net)
    for _ in victims:
        net.add_node(rng.sample(survivors, degree))
    logger.debug("churn replaced %d nodes", len(victims))
    return net


def hub_attack_targets(net: OverlayNetwork, count: int) -> list[NodeId]:
    """The ``count`` alive nodes of highest in-degree, ties by ascending id."""
    snap = take_snapshot(net)
    order = np.lexsort((snap.ids, -snap.in_degrees))[:count]
    return [int(snap.ids[i]) for i in order]


def apply_hub_attack(net: OverlayNetwork, count: int) -> OverlayNetwork:
    targets = hub_attack_targets(net, count)
    for node in targets:
        net.kill(node)
    logger.info("hub attack removed %s", targets)
    return net


def clamped_rounded_normal(rng: RngStream, mean: float, std: float, size: int | None = None):
    """``round(max(0, N(mean, std)))``, half-up rounding."""
    draws = rng.generator.normal(mean, std, size=size)
    rounded = np.floor(np.maximum(draws, 0.0) + 0.5).astype(np.int64)
    return int(rounded) if size is None else rounded


def phenix_growth_tick(net: OverlayNetwork) -> OverlayNetwork:
    """Join ``round(max(0, N(2, 1)))`` nodes, never exceeding ``n`` alive."""
    rng = _scenario_rng(net)
    wanted = clamped_rounded_normal(rng, GROWTH_MEAN, GROWTH_STD)
    for _ in range(min(wanted, net.params.n - len(net.alive))):
        alive = net.alive_ids()
        new_node = net.add_node(rng.sample(alive, min(net.params.c, len(alive))))
        phenix_join(net, new_node)
    return net


def phenix_churn_tick(net: OverlayNetwork) -> OverlayNetwork:
    """Growth tick, then ``round(max(0, N(0, 1)))`` random removals."""
    phenix_growth_tick(net)
    _kill_random(net, clamped_rounded_normal(_scenario_rng(net), REMOVAL_MEAN, REMOVAL_STD))
    return net


def apply_event(net: OverlayNetwork, event: ScenarioEvent) -> OverlayNetwork:
    match event.kind:
        case EventKind.CRASH:
            return apply_crash(net, event.fraction)
        case EventKind.CHURN:
            return apply_churn_tick(net, event.fraction, event.replacement_degree)
        case EventKind.HUB_ATTACK:
            return apply_hub_attack(net, event.count)
        case EventKind.GROW:
            return phenix_growth_tick(net)
        case EventKind.PHENIX_CHURN:
            return phenix_churn_tick(net)
    raise ValueError(f"unknown event kind {event.kind}")
