"""Cubic-point classification machinery for the Atkin-Lehner quotients X0+(N)."""

__version__ = "0.1.0"
