"""Phenix: preferential attachment performed once, when a node joins."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from .base import NodeId, Request
from .elevator import rank_by_frequency

if TYPE_CHECKING:
    from ..overlay import OverlayNetwork


@dataclass
class PhenixState:
    cache: list[NodeId]
    backward_peers: dict[NodeId, None] = field(default_factory=dict)
    # id -> cycle the ping arrived
    gamma_list: dict[NodeId, int] = field(default_factory=dict)
    c_m: int = 0
    connexion_requests: int = 0
    backward_created: int = 0

    @classmethod
    def from_cache(cls, cache: list[NodeId]) -> PhenixState:
        return cls(cache=list(cache))

    def cache_ids(self) -> list[NodeId]:
        return list(self.cache)

    def out_neighbors(self) -> list[NodeId]:
        return self.cache + [p for p in self.backward_peers if p not in self.cache]


def phenix_handle(
    net: OverlayNetwork, node: NodeId, request: Request, sender: NodeId
) -> list[NodeId] | None:
    state: PhenixState = net.nodes[node]
    if request is Request.CACHE_REQUEST:
        response = list(state.cache)
        for neighbor in state.cache:
            if neighbor != node and net.is_responding(neighbor):
                phenix_handle(net, neighbor, Request.PING_REQUEST, node)
        return response
    if request is Request.PING_REQUEST:
        state.gamma_list[sender] = net.cycle
        return None
    if request is Request.CONNEXION_REQUEST:
        state.c_m += 1
        state.connexion_requests += 1
        if state.c_m >= net.params.gamma:
            if sender != node:
                state.backward_peers[sender] = None
            state.c_m -= net.params.gamma
            state.backward_created += 1
        return None
    raise ValueError(f"phenix does not handle {request}")


def phenix_join(net: OverlayNetwork, new_node: NodeId) -> None:
    """Split the bootstrap cache, attach to the most frequent distance-two peers."""
    state: PhenixState = net.nodes[new_node]
    split = math.ceil(len(state.cache) / 2)
    g_random = state.cache[:split]
    g_friend = state.cache[split:]
    excluded = set(g_random) | {new_node}

    candidates: Counter[NodeId] = Counter()
    for friend in g_friend:
        if not net.is_responding(friend):
            continue
        neighbor_list = phenix_handle(net, friend, Request.CACHE_REQUEST, new_node)
        candidates.update(p for p in neighbor_list if p not in excluded)

    # Preferred peers fill at most the slots G_random left free.
    room = max(0, net.params.c - len(g_random))
    g_preferred = rank_by_frequency(candidates)[: min(net.params.s, room)]
    for peer in g_preferred:
        if net.is_responding(peer):
            phenix_handle(net, peer, Request.CONNEXION_REQUEST, new_node)
    state.cache = g_random + g_preferred


def phenix_round(net: OverlayNetwork, node: NodeId) -> None:
    """Per-cycle housekeeping: gamma-list entries older than ``tau`` expire."""
    state: PhenixState = net.nodes[node]
    if state.gamma_list:
        horizon = net.cycle - net.params.tau
        state.gamma_list = {p: t for p, t in state.gamma_list.items() if t > horizon}
