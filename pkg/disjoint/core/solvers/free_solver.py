"""Interaction-free intra-layer pair."""
from .harmonic_solver import HarmonicSolver


class FreeSolver(HarmonicSolver):
    """Pair feeling only the effective trap ω_k."""

    def __init__(self, dimension: int):
        super().__init__(0.0, dimension, name="Free")
