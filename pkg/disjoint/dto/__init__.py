"""Data Transfer Objects for the CLI layer."""
from .config_dto import (
    SUBCOMMANDS, ConfigDocument, CouplingSection, LayerSection, ParsedConfig, RunConfig, RunSection,
    ShiftSection, SystemSection,
)
from .table_dto import Table

__all__ = [
    'SUBCOMMANDS', 'ConfigDocument', 'CouplingSection', 'LayerSection', 'ParsedConfig', 'RunConfig', 'RunSection',
    'ShiftSection', 'SystemSection', 'Table',
]
