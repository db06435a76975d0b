"""Domain logic: special functions, the layered model, normal modes, intra-layer solvers and oracles."""
from .errors import (
    CapError, ConfigError, DecouplingError, DisjointError, DomainError, ModelError, NumericError, PoleError,
    UnstableFormError, VerificationError,
)

__all__ = [
    'CapError', 'ConfigError', 'DecouplingError', 'DisjointError', 'DomainError', 'ModelError', 'NumericError',
    'PoleError', 'UnstableFormError', 'VerificationError',
]
