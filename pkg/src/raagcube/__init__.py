"""Finite combinatorics of right-angled Artin groups and special cube complexes."""

__version__ = "0.1.0"
