"""Negative-momentum regret minimization for two-player zero-sum games."""

__version__ = "0.1.0"
