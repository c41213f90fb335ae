"""Exact constructions and discrepancy computations for low-discrepancy point sets."""

__version__ = "0.1.0"
