"""Overlay network state, node lifecycle, cycle scheduler and the sampling API."""

from __future__ import annotations

import logging
from collections.abc import Iterable
from dataclasses import dataclass, field

from .config import SimParams
from .errors import NodeNotAliveError, NoHubsError, NoPeersError, ProtocolMismatchError
from .protocols import PROTOCOLS, ElevatorState, NodeId, NodeState, ProtocolKind
from .rng import RngStream, spawn_streams

logger = logging.getLogger(__name__)


@dataclass
class OverlayNetwork:
    params: SimParams
    protocol: ProtocolKind
    streams: dict[str, RngStream]
    nodes: dict[NodeId, NodeState] = field(default_factory=dict)
    alive: set[NodeId] = field(default_factory=set)
    next_id: NodeId = 0
    cycle: int = 0

    @property
    def rng(self) -> RngStream:
        """Stream consumed by protocol rounds and request handlers."""
        return self.streams["protocol"]

    def add_node(self, cache: Iterable[NodeId]) -> NodeId:
        """Create a live node with a fresh, never reused id."""
        node = self.next_id
        self.next_id += 1
        cache = [p for p in dict.fromkeys(cache) if p != node]
        self.nodes[node] = PROTOCOLS[self.protocol].make_state(cache)
        self.alive.add(node)
        return node

    def kill(self, node: NodeId) -> None:
        """Remove ``node`` from the alive set; its state stays addressable."""
        self.alive.discard(node)

    def is_responding(self, peer: NodeId) -> bool:
        return peer in self.alive

    def alive_ids(self) -> list[NodeId]:
        return sorted(self.alive)

    def state(self, node: NodeId) -> NodeState:
        if node not in self.alive:
            raise NodeNotAliveError(f"node {node} is not alive")
        return self.nodes[node]


def _k_out_caches(n: int, k: int, rng: RngStream) -> list[list[NodeId]]:
    """Each of ``n`` nodes picks ``k`` distinct others uniformly."""
    caches = []
    for node in range(n):
        draws = rng.generator.choice(n - 1, size=k, replace=False)
        caches.append([int(j) if j < node else int(j) + 1 for j in draws])
    return caches


def init_k_out(
    params: SimParams,
    protocol: ProtocolKind | str = ProtocolKind.ELEVATOR,
    streams: dict[str, RngStream] | None = None,
    size: int | None = None,
) -> OverlayNetwork:
    """Network of ``size`` (default ``n``) nodes wired as a random k-out graph, ``k = c``.

    A network smaller than ``c + 1`` nodes is wired with ``k = size - 1``.
    """
    streams = spawn_streams(params.seed, 0) if streams is None else streams
    size = params.n if size is None else size
    net = OverlayNetwork(params=params, protocol=ProtocolKind(protocol), streams=streams)
    k = min(params.c, size - 1)
    for cache in _k_out_caches(size, k, streams["init"]):
        net.add_node(cache)
    logger.debug("initialised %s network: %d nodes, k=%d", net.protocol, size, k)
    return net


def init_phenix_seed(params: SimParams, streams: dict[str, RngStream] | None = None) -> OverlayNetwork:
    """Small Phenix seed network of ``phenix_initial_size`` nodes."""
    return init_k_out(params, ProtocolKind.PHENIX, streams, size=params.phenix_initial_size)


def step_cycle(net: OverlayNetwork) -> OverlayNetwork:
    """Every alive node runs one active round, in a fresh random order."""
    run_round = PROTOCOLS[net.protocol].run_round
    for node in net.rng.permutation(net.alive_ids()):
        if node in net.alive:
            run_round(net, node)
    net.cycle += 1
    return net


def is_responding(net: OverlayNetwork, peer: NodeId) -> bool:
    return net.is_responding(peer)


def get_peer(net: OverlayNetwork, node: NodeId) -> NodeId:
    """Uniform draw over the node's cache."""
    cache = net.state(node).cache_ids()
    if not cache:
        raise NoPeersError(f"node {node} has no peers")
    return net.streams["service"].choice(cache)


def get_hub(net: OverlayNetwork, node: NodeId) -> NodeId:
    """Uniform draw over the node's hub slots."""
    state = net.state(node)
    if not isinstance(state, ElevatorState):
        raise ProtocolMismatchError(f"get_hub requires the elevator protocol, not {net.protocol}")
    hubs = state.hubs()
    if not hubs:
        raise NoHubsError(f"node {node} knows no hubs yet")
    return net.streams["service"].choice(hubs)
