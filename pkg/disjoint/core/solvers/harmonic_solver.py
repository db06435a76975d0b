"""Harmonic intra-layer solvers: a quadratic bond Ω and the interaction-free pair."""
import math

from .base_solver import IntraSolver
from ..intralayer import IntraLevel
from ..modes import degeneracy


class HarmonicSolver(IntraSolver):
    """Relative oscillator at √(ω_k² + Ω²); exchange-symmetric levels carry an even number of quanta."""

    def __init__(self, omega: float, dimension: int, name: str = "Harmonic"):
        super().__init__(name, dimension)
        self.omega = omega

    def relative_frequency(self, omega_k: float) -> float:
        return math.sqrt(omega_k * omega_k + self.omega * self.omega)

    def solve(self, omega_k: float, mu: float, count: int) -> list[IntraLevel]:
        w = self.relative_frequency(omega_k)
        half_d = 0.5 * self.dimension
        kind = "harmonic" if self.omega > 0.0 else "free"
        levels = []
        for j in range(count):
            quanta = 2 * j
            levels.append(IntraLevel(
                kind=kind, quantum_number=float(quanta), energy=(quanta + half_d) * w / omega_k,
                msr=(quanta + half_d) * omega_k / w, omega_k=omega_k, dimension=self.dimension,
                degeneracy=degeneracy(quanta, self.dimension), strength=self.omega,
            ))
        self.log_solution(omega_k, levels)
        return levels

    def get_capabilities(self) -> list[str]:
        return ["N"]
