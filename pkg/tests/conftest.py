from __future__ import annotations

from collections.abc import Callable

import pytest

from hubsim.config import SimParams
from hubsim.overlay import OverlayNetwork
from hubsim.protocols import PROTOCOLS, NodeId, ProtocolKind
from hubsim.rng import spawn_streams


def build_network(
    protocol: ProtocolKind | str,
    caches: dict[NodeId, list[NodeId]],
    seed: int = 1,
    **params: object,
) -> OverlayNetwork:
    """Hand-wired network: node ``i`` gets exactly ``caches[i]``."""
    sim = SimParams(seed=seed, **params)
    kind = ProtocolKind(protocol)
    net = OverlayNetwork(params=sim, protocol=kind, streams=spawn_streams(seed, 0))
    for node, cache in sorted(caches.items()):
        net.nodes[node] = PROTOCOLS[kind].make_state(list(cache))
        net.alive.add(node)
    net.next_id = max(caches, default=-1) + 1
    return net


@pytest.fixture
def network_factory() -> Callable[..., OverlayNetwork]:
    return build_network


@pytest.fixture(autouse=True)
def _no_seed_override(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.delenv("HUBSIM_SEED", raising=False)
