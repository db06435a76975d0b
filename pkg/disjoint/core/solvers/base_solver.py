"""Base class for all intra-layer solvers."""
from abc import ABC, abstractmethod
import logging

from ..intralayer import IntraLevel

logger = logging.getLogger(__name__)


class IntraSolver(ABC):
    """Base class for the two-body problem inside one doubly occupied layer."""

    def __init__(self, name: str, dimension: int):
        """
        Initialize the base solver.

        Args:
            name: Name of the solver (e.g., "InverseSquare", "Delta")
            dimension: Spatial dimension D of the layer
        """
        self.name = name
        self.dimension = dimension
        self.logger = logging.getLogger(f"{__name__}.{name}")

    @abstractmethod
    def solve(self, omega_k: float, mu: float, count: int) -> list[IntraLevel]:
        """
        Solve for the lowest exchange-symmetric levels.

        Args:
            omega_k: Effective intra-layer frequency ω_k (units ω₀)
            mu: Reduced mass of the pair
            count: Number of levels to return

        Returns:
            Levels sorted by energy, energies in units of ħω_k
        """
        pass

    @abstractmethod
    def get_capabilities(self) -> list[str]:
        """
        Get list of sweep axes this solver supports.

        Returns:
            List of axis names
        """
        pass

    def log_solution(self, omega_k: float, levels: list[IntraLevel]):
        """Log solver results."""
        energies = ", ".join(f"{level.energy:.6f}" for level in levels[:4])
        self.logger.debug(
            f"Solver: {self.name} | D={self.dimension} | omega_k={omega_k:.6f} | Levels: {energies}"
        )
