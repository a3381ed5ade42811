"""Finite-model coherence engine for fibered categories over a factorization base."""

__version__ = "1.0.0"
