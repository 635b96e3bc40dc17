"""Counting Diophantine m-tuples over F_p by brute force, closed formulas and
the elliptic-curve fiber decomposition."""

__version__ = "0.1.0"
