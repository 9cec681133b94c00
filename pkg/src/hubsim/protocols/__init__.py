"""Protocol registry: state factory and active round per protocol."""

from .base import NodeId, NodeState, ProtocolKind, ProtocolSpec, Request
from .elevator import ElevatorState, elevator_handle, elevator_round
from .newscast import NewscastState, newscast_handle, newscast_round
from .phenix import PhenixState, phenix_handle, phenix_join, phenix_round
from .proofs import ProofsState, proofs_exchange, proofs_handle, proofs_round

PROTOCOLS: dict[ProtocolKind, ProtocolSpec] = {
    ProtocolKind.ELEVATOR: ProtocolSpec(
        kind=ProtocolKind.ELEVATOR,
        make_state=ElevatorState.from_cache,
        run_round=elevator_round,
    ),
    ProtocolKind.PROOFS: ProtocolSpec(
        kind=ProtocolKind.PROOFS,
        make_state=ProofsState.from_cache,
        run_round=proofs_round,
    ),
    ProtocolKind.NEWSCAST: ProtocolSpec(
        kind=ProtocolKind.NEWSCAST,
        make_state=NewscastState.from_cache,
        run_round=newscast_round,
    ),
    ProtocolKind.PHENIX: ProtocolSpec(
        kind=ProtocolKind.PHENIX,
        make_state=PhenixState.from_cache,
        run_round=phenix_round,
    ),
}

__all__ = [
    "PROTOCOLS",
    "ElevatorState",
    "NewscastState",
    "NodeId",
    "NodeState",
    "PhenixState",
    "ProofsState",
    "ProtocolKind",
    "ProtocolSpec",
    "Request",
    "elevator_handle",
    "elevator_round",
    "newscast_handle",
    "newscast_round",
    "phenix_handle",
    "phenix_join",
    "phenix_round",
    "proofs_exchange",
    "proofs_handle",
    "proofs_round",
]
