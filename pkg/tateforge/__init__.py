"""Symbolic F_2 homology engine for Tate and homotopy fixed point spectral sequences."""

__version__ = "0.1.0"
