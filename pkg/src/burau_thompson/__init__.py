"""Exact algebra for Thompson's group T, its braided extension and the Burau/Magnus representation."""

__version__ = "0.1.0"
