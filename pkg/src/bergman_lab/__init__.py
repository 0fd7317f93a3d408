"""Numerics for radial doubling weights on the unit disc."""
__version__ = "0.1.0"
