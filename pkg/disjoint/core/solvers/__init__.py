"""Intra-layer solver adapters."""
from ..errors import DomainError
from ..model import IntraPotential
from .base_solver import IntraSolver
from .delta_solver import DeltaSolver
from .free_solver import FreeSolver
from .harmonic_solver import HarmonicSolver
from .inverse_square_solver import InverseSquareSolver


def solver_for(potential: IntraPotential, dimension: int) -> IntraSolver:
    """Pick the solver for an intra potential in D dimensions."""
    if potential.kind == "inverse_square":
        return InverseSquareSolver(potential.g, dimension)
    if potential.kind == "delta":
        return DeltaSolver(potential, dimension)
    if potential.kind == "harmonic":
        return HarmonicSolver(potential.omega, dimension)
    if potential.kind == "none":
        return FreeSolver(dimension)
    raise DomainError(f"Unknown intra kind: {potential.kind}")


__all__ = [
    "IntraSolver", "InverseSquareSolver", "DeltaSolver", "HarmonicSolver", "FreeSolver", "solver_for",
]
