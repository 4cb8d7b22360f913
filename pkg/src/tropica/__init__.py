"""Tropical curves, lattice-path enumeration and amoeba numerics."""

__version__ = "0.1.0"
