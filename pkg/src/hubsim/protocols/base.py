"""Types shared by the protocol modules and the overlay."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from enum import StrEnum
from typing import TYPE_CHECKING, Protocol

if TYPE_CHECKING:
    from ..overlay import OverlayNetwork

NodeId = int


class ProtocolKind(StrEnum):
    ELEVATOR = "elevator"
    PROOFS = "proofs"
    NEWSCAST = "newscast"
    PHENIX = "phenix"


class Request(StrEnum):
    CACHE_REQUEST = "CACHE_REQUEST"
    BACKWARD_REQUEST = "BACKWARD_REQUEST"
    CONNEXION_REQUEST = "CONNEXION_REQUEST"
    PING_REQUEST = "PING_REQUEST"


class NodeState(Protocol):
    def cache_ids(self) -> list[NodeId]:
        """Ids in the cache, in cache order."""
        ...

    def out_neighbors(self) -> list[NodeId]:
        """Every id this node holds an outgoing connection to."""
        ...


@dataclass(frozen=True)
class ProtocolSpec:
    """How the overlay creates node state and runs one active round."""

    kind: ProtocolKind
    make_state: Callable[[list[NodeId]], NodeState]
    run_round: Callable[[OverlayNetwork, NodeId], None]
