"""Newscast gossip membership with aged descriptors."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

from .base import NodeId

if TYPE_CHECKING:
    from ..overlay import OverlayNetwork

Descriptor = tuple[NodeId, int]


@dataclass
class NewscastState:
    # id -> age in cycles; dict order is the view order.
    cache: dict[NodeId, int]

    @classmethod
    def from_cache(cls, cache: list[NodeId]) -> NewscastState:
        return cls(cache=dict.fromkeys(cache, 0))

    def cache_ids(self) -> list[NodeId]:
        return list(self.cache)

    def out_neighbors(self) -> list[NodeId]:
        return list(self.cache)


def make_buffer(net: OverlayNetwork, node: NodeId) -> list[Descriptor]:
    """Own fresh descriptor followed by the ``c/2 - 1`` head entries of the permuted view."""
    state: NewscastState = net.nodes[node]
    permuted = net.rng.permutation(list(state.cache.items()))
    state.cache = dict(permuted)
    return [(node, 0)] + permuted[: max(0, net.params.c // 2 - 1)]


def sent_ids(buffer: list[Descriptor] | None) -> list[NodeId]:
    """View entries shipped in ``buffer``, without the sender's own descriptor."""
    return [peer for peer, _ in buffer[1:]] if buffer else []


def merge_buffer(
    net: OverlayNetwork,
    node: NodeId,
    received: list[Descriptor],
    sent: list[NodeId] | None = None,
) -> None:
    """Merge ``received`` into the view, cut it back to ``c`` and age every entry.

    Duplicates keep their smallest age. The excess over ``c`` is removed in
    three passes: up to ``newscast_healer`` oldest entries (ties at random), then
    up to ``newscast_swapper`` of the ``sent`` entries in send order, then
    entries drawn at random.
    """
    params = net.params
    state: NewscastState = net.nodes[node]
    cache = state.cache
    refreshed: set[NodeId] = set()
    for peer, age in received:
        if peer == node:
            continue
        if peer not in cache:
            cache[peer] = age
        elif age < cache[peer]:
            # A fresher copy goes to the tail, out of the sent head.
            del cache[peer]
            cache[peer] = age
            refreshed.add(peer)

    excess = len(cache) - params.c
    if excess > 0 and params.newscast_healer > 0:
        by_age = net.rng.permutation(list(cache.items()))
        by_age.sort(key=lambda entry: entry[1], reverse=True)
        for peer, _ in by_age[: min(params.newscast_healer, excess)]:
            del cache[peer]
        excess = len(cache) - params.c
    if excess > 0 and sent:
        head = [peer for peer in sent if peer in cache and peer not in refreshed]
        for peer in head[: min(params.newscast_swapper, excess)]:
            del cache[peer]
        excess = len(cache) - params.c
    if excess > 0:
        for peer in net.rng.sample(list(cache), excess):
            del cache[peer]
    state.cache = {peer: age + 1 for peer, age in cache.items()}


def newscast_handle(
    net: OverlayNetwork, node: NodeId, buffer: list[Descriptor] | None, sender: NodeId
) -> list[Descriptor] | None:
    """Passive side. ``buffer`` is None for a pure pull; the reply is None for a pure push."""
    mode = net.params.newscast_mode
    reply = make_buffer(net, node) if mode != "push" else None
    if buffer is not None:
        merge_buffer(net, node, buffer, sent_ids(reply))
    return reply


def newscast_round(net: OverlayNetwork, node: NodeId) -> None:
    state: NewscastState = net.nodes[node]
    if not state.cache:
        return
    partner = net.rng.choice(list(state.cache))
    if not net.is_responding(partner):
        return
    mode = net.params.newscast_mode
    buffer = make_buffer(net, node) if mode != "pull" else None
    reply = newscast_handle(net, partner, buffer, node)
    if reply is not None:
        merge_buffer(net, node, reply, sent_ids(buffer))
