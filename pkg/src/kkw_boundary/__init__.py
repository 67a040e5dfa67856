"""Exact boundary terms of the noncommutative residue for Dirac-type operators, with a numeric oracle."""

__version__ = "0.1.0"
