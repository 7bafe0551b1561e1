"""Exact computations with modules of modular covariants for cyclic p-groups."""

__version__ = "0.1.0"
