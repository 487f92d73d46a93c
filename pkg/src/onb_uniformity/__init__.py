"""Uniformity of random orthonormal bases: exact sphere moments, Radon spectrum and Monte Carlo checks."""

__version__ = "0.1.0"
