"""Exact and numerical checks of direct product theorems for query and communication complexity."""

__version__ = "0.1.0"
