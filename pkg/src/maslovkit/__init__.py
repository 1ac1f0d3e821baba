"""Numerical Maslov indices for coisotropic boundary data."""

__version__ = "0.1.0"
