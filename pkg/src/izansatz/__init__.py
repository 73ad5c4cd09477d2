"""Renormalized coordinates and genus expansions for matrix-model free energies."""

__version__ = "0.1.0"
