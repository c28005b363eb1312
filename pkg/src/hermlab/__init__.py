"""Exact local densities, Whittaker functions and global constants for Hermitian lattices."""

__version__ = "0.1.0"
