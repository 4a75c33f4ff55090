"""Continuous-variable telecloning simulator with Gaussian and photon-added/subtracted resources."""

__version__ = "0.1.0"
