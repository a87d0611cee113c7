"""Lie algebras with a prescribed sl3 decomposition, over Q, with exact checks."""

__version__ = "0.1.0"
