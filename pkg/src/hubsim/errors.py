"""Exceptions raised by the simulator."""


class HubsimError(Exception):
    """Base class for all simulator errors."""


class ConfigError(HubsimError, ValueError):
    """Invalid parameters or experiment configuration."""


class DomainError(ConfigError):
    """Arguments outside the domain of a closed-form probability."""


class NodeNotAliveError(HubsimError, LookupError):
    """An operation required a live node."""


class NoPeersError(HubsimError, LookupError):
    """The node's cache is empty; the caller may retry next cycle."""


class NoHubsError(NoPeersError):
    """No hub slot is occupied yet."""


class ProtocolMismatchError(HubsimError, TypeError):
    """The operation is only defined for another protocol."""
