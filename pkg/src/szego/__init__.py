"""Numerical laboratory for the cubic Szego equation on the Hardy space."""

__version__ = "0.1.0"
