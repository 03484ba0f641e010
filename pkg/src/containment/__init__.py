"""Containment-game simulation and verification engine on planar lattices."""

__version__ = "0.1.0"
