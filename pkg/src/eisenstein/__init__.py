"""Exact classification of Eisenstein polynomials of degree p^2 and p^3."""

__version__ = "0.1.0"
