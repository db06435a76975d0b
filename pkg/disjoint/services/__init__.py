"""Service layer for batch runs."""
from .run_service import RunService

__all__ = ['RunService']
