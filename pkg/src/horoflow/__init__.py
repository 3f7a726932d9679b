"""Horocycle and geodesic section maps on the modular surface."""

__version__ = "0.1.0"
