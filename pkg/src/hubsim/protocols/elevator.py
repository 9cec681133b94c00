"""Elevator hub-sampling protocol.

Each round a node reads the caches of its neighbors (its distance-two
neighborhood), keeps the ``h`` most frequent ids as hub slots at the front of
its cache, fills ``c - h`` slots from the backward lists of the preferred peers
and tops up from the remaining frequency map.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from .base import NodeId, Request

if TYPE_CHECKING:
    from ..overlay import OverlayNetwork


@dataclass
class ElevatorState:
    cache: list[NodeId]
    # Ordered set: insertion order kept, membership in O(1).
    backward_peers: dict[NodeId, None] = field(default_factory=dict)
    hub_slots: int = 0

    @classmethod
    def from_cache(cls, cache: list[NodeId]) -> ElevatorState:
        return cls(cache=list(cache))

    def cache_ids(self) -> list[NodeId]:
        return list(self.cache)

    def out_neighbors(self) -> list[NodeId]:
        return self.cache

    def hubs(self) -> list[NodeId]:
        return self.cache[: self.hub_slots]


def rank_by_frequency(frequency: Counter[NodeId]) -> list[NodeId]:
    """Descending frequency, ties by ascending id."""
    return [peer for peer, _ in sorted(frequency.items(), key=lambda kv: (-kv[1], kv[0]))]


def elevator_handle(
    net: OverlayNetwork, node: NodeId, request: Request, sender: NodeId
) -> list[NodeId]:
    """Background thread of ``node``: answer ``request`` from ``sender``."""
    state: ElevatorState = net.nodes[node]
    if request is Request.CACHE_REQUEST:
        response = list(state.cache)
        if sender != node and sender not in state.backward_peers:
            state.backward_peers[sender] = None
        return response
    if request is Request.BACKWARD_REQUEST:
        # A uniform sample without replacement is the prefix of a fresh shuffle.
        return net.rng.sample(list(state.backward_peers), net.params.maxsize_buffer_backward)
    raise ValueError(f"elevator does not handle {request}")


def elevator_round(net: OverlayNetwork, node: NodeId) -> None:
    """Active thread of ``node``: one run of the protocol."""
    params = net.params
    c, h = params.c, params.h
    state: ElevatorState = net.nodes[node]
    previous_hubs = state.hubs()

    state.backward_peers = {p: None for p in state.backward_peers if net.is_responding(p)}
    state.cache = [p for p in state.cache if net.is_responding(p)]

    frequency: Counter[NodeId] = Counter()
    for peer in state.cache:
        response = elevator_handle(net, peer, Request.CACHE_REQUEST, node)
        frequency.update(p for p in response if p != node and net.is_responding(p))

    ranked = rank_by_frequency(frequency)
    if params.sticky_hubs:
        kept = [p for p in previous_hubs if p in frequency and net.is_responding(p)][:h]
        kept_set = set(kept)
        ranked = kept + [p for p in ranked if p not in kept_set]
    preferred = ranked[:c]

    for peer in preferred:
        del frequency[peer]

    preferred_backward: dict[NodeId, None] = {}
    for peer in preferred:
        if not net.is_responding(peer):
            continue
        for p in elevator_handle(net, peer, Request.BACKWARD_REQUEST, node):
            preferred_backward.setdefault(p)
    pool = net.rng.permutation(list(preferred_backward))

    cache = preferred[:h]
    placed = set(cache)
    quota = c - h
    for peer in pool:
        if quota <= 0:
            break
        if peer == node or peer in placed:
            continue
        cache.append(peer)
        placed.add(peer)
        quota -= 1

    missing = c - len(cache)
    if missing > 0:
        candidates = [p for p in frequency if p not in placed]
        cache.extend(net.rng.sample(candidates, missing))

    state.cache = cache
    state.hub_slots = min(h, len(preferred))
