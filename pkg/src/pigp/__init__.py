"""Counting Galois extensions of Q_p with a prescribed finite Galois group."""

__version__ = "0.1.0"
