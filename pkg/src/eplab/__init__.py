"""Numerical experiments on exceptional points of growing order N."""

__version__ = "0.1.0"
