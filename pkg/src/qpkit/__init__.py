"""Quivers with potentials, their mutations and decorated representations."""

__version__ = "0.1.0"
