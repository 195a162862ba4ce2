"""Secant varieties, defectivity and identifiability checks by exact and modular linear algebra."""

__version__ = "0.1.0"
