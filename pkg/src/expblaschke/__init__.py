"""Numerical checks for exponential Blaschke products."""

__version__ = "0.1.0"
