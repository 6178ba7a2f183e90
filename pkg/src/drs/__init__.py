"""Approximations, groupoids and lattices over finite up-directed relational spaces."""

__version__ = "0.1.0"
