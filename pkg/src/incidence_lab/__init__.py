"""Exact-arithmetic toolkit for semi-algebraic bipartite graphs."""

__version__ = "0.1.0"
