"""Exception hierarchy for the disjoint solver."""
from typing import Optional


class DisjointError(Exception):
    """Base class for every error raised by the package."""


class ConfigError(DisjointError, ValueError):
    """Spec-file parse failure, unknown key or units mismatch."""

    def __init__(self, message: str, line: Optional[int] = None, key: Optional[str] = None):
        self.line = line
        self.key = key
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


class ModelError(DisjointError, ValueError):
    """Malformed system specification."""


class DecouplingError(DisjointError, ValueError):
    """Decoupling conditions violated where the decoupled solver needs them."""


class PoleError(DisjointError, ValueError):
    """Special function evaluated at (or within 1e-14 of) a pole."""


class DomainError(DisjointError, ValueError):
    """Argument outside the domain of an operation."""


class CapError(DisjointError, ValueError):
    """Energy cap below the zero-point energy or size cap exceeded."""


class UnstableFormError(DisjointError, RuntimeError):
    """Quadratic form with a genuinely negative eigenvalue (inverted oscillator)."""


class NumericError(DisjointError, RuntimeError):
    """Non-convergence, quadrature disagreement or too coarse a grid."""


class VerificationError(DisjointError, RuntimeError):
    """One or more oracle checks failed."""
