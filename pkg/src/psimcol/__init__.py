"""Birkhoff pseudospectral integration matrices and collocation solvers."""

__version__ = "0.1.0"
