"""Numerics for m-accretive and m-sectorial extensions of sectorial operators."""

__version__ = "0.1.0"
