"""Spectrum-preserving compilation of first-order sentences into sentences over bipartite graphs."""

__version__ = "0.1.0"
