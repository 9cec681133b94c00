"""PROOFS shuffling protocol."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

from .base import NodeId

if TYPE_CHECKING:
    from ..overlay import OverlayNetwork


@dataclass
class ProofsState:
    cache: list[NodeId]

    @classmethod
    def from_cache(cls, cache: list[NodeId]) -> ProofsState:
        return cls(cache=list(cache))

    def cache_ids(self) -> list[NodeId]:
        return list(self.cache)

    def out_neighbors(self) -> list[NodeId]:
        return self.cache


def install_subset(
    cache: list[NodeId],
    received: list[NodeId],
    sent: list[NodeId],
    self_id: NodeId,
    capacity: int,
) -> None:
    """Install ``received`` into ``cache`` in place.

    Own address and ids already cached are dropped. Remaining ids go to empty
    slots first, then overwrite the ``sent`` entries in order; ids left over
    once both run out are discarded.
    """
    replaceable = [p for p in sent if p in cache]
    for peer in dict.fromkeys(received):
        if peer == self_id or peer in cache:
            continue
        if len(cache) < capacity:
            cache.append(peer)
        elif replaceable:
            victim = replaceable.pop(0)
            cache[cache.index(victim)] = peer
        else:
            break


def proofs_handle(
    net: OverlayNetwork,
    node: NodeId,
    subset: list[NodeId],
    sender: NodeId,
    reply: list[NodeId] | None = None,
) -> list[NodeId]:
    """Passive side of a shuffle: answer with an own subset, then install ``subset``.

    ``reply`` preselects the answer instead of drawing it.
    """
    state: ProofsState = net.nodes[node]
    if reply is None:
        reply = net.rng.sample(state.cache, min(net.params.l, len(state.cache)))
    install_subset(state.cache, subset, reply, node, net.params.c)
    return list(reply)


def proofs_exchange(
    net: OverlayNetwork,
    node: NodeId,
    partner: NodeId,
    subset: list[NodeId],
    reply: list[NodeId] | None = None,
) -> bool:
    """Shuffle ``subset`` (which contains ``partner``) with ``partner``.

    Returns False when the partner does not respond; nothing changes then.
    """
    if not net.is_responding(partner):
        return False
    sent = [p for p in subset if p != partner] + [node]
    received = proofs_handle(net, partner, sent, node, reply=reply)
    # The partner's own entry is the first to give way.
    replaceable = [partner] + [p for p in subset if p != partner]
    state: ProofsState = net.nodes[node]
    install_subset(state.cache, received, replaceable, node, net.params.c)
    return True


def proofs_round(net: OverlayNetwork, node: NodeId, l: int | None = None) -> None:  # noqa: E741
    state: ProofsState = net.nodes[node]
    length = net.params.l if l is None else l
    if length <= 0 or not state.cache:
        return
    subset = net.rng.sample(state.cache, min(length, len(state.cache)))
    partner = net.rng.choice(subset)
    proofs_exchange(net, node, partner, subset)
