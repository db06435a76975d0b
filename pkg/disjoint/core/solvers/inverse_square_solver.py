"""Inverse-square (Calogero) intra-layer solver."""
from .base_solver import IntraSolver
from ..intralayer import IntraLevel, inverse_square_levels


class InverseSquareSolver(IntraSolver):
    """Closed-form tower 2n + l_eff + 3/2 for g/x² plus the trap."""

    def __init__(self, g: float, dimension: int, angular: int = 0):
        super().__init__("InverseSquare", dimension)
        self.g = g
        self.angular = angular

    def solve(self, omega_k: float, mu: float, count: int) -> list[IntraLevel]:
        levels = inverse_square_levels(self.g, self.dimension, self.angular, count, omega_k)
        self.log_solution(omega_k, levels)
        return levels

    def get_capabilities(self) -> list[str]:
        return ["N", "g"]
