"""Exact dynamics of two two-level atoms coupled to a single-mode thermal field."""

__version__ = "0.1.0"
