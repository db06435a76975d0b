"""Contact-interaction intra-layer solver for D = 1 and D = 2."""
import math

from .base_solver import IntraSolver
from ..errors import DomainError
from ..intralayer import IntraLevel, delta1d_levels, delta2d_levels
from ..model import IntraPotential


class DeltaSolver(IntraSolver):
    """Transcendental roots of the trapped delta problem, even sector in 1D and s-wave in 2D."""

    def __init__(self, potential: IntraPotential, dimension: int):
        if dimension not in (1, 2):
            raise DomainError(f"delta interactions are defined for D=1 and D=2 only, got D={dimension}")
        super().__init__("Delta", dimension)
        self.potential = potential

    def a_over_b(self, omega_k: float, mu: float) -> float:
        """Scattering length in units of this layer's b_ω."""
        b_omega = 1.0 / math.sqrt(mu * omega_k)
        return self.potential.a_over_b(b_omega)

    def solve(self, omega_k: float, mu: float, count: int) -> list[IntraLevel]:
        ratio = self.a_over_b(omega_k, mu)
        if self.dimension == 1:
            levels = [level for level in delta1d_levels(ratio, count, omega_k) if level.kind == "delta1d_even"]
        else:
            levels = delta2d_levels(-math.log(ratio), count, omega_k)
        self.log_solution(omega_k, levels)
        return levels

    def get_capabilities(self) -> list[str]:
        return ["N", "a1_over_b"] if self.dimension == 1 else ["N", "ln_b_over_a2"]
