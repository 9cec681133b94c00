"""Cycle-driven simulator for hub-sampling and peer-sampling overlays."""

__version__ = "0.1.0"
