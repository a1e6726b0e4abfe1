"""Exact Galois-equivariant tropical geometry for twisted toric varieties."""

__version__ = "0.1.0"
