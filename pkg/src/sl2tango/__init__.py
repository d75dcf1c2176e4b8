"""Exact computations around SL(2)-invariant Tango bundles and their weighted versions."""

__version__ = "0.1.0"
