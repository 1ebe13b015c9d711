"""Legendrian knot DGAs, augmentations, linearized homology and filling obstructions."""

__version__ = "0.1.0"
