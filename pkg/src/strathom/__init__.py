"""Exact homological algebra for finite-dimensional path algebras."""

__version__ = "0.1.0"
