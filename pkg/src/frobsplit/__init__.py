"""Finite classical groups, anisotropic tori, exact densities, and Weil polynomial splitting."""

__version__ = "0.1.0"
