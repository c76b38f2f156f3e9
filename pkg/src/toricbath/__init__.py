"""Toric-code decoding under correlated noise and bosonic-bath error analytics."""

__version__ = "0.1.0"
