"""Spectral laboratory for the self-adjoint prolate operator."""

__version__ = "0.1.0"
