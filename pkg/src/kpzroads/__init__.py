"""Exponential LPP road-traffic laboratory."""

__version__ = "0.1.0"
