"""Combinatorial curves, twists, and complexes on small surfaces."""

__version__ = "0.1.0"
