"""Command handlers for the batch CLI."""
from .cli_commands import HANDLERS, exit_code_for, run
from .config_file import parse_config, serialize_config

__all__ = ['HANDLERS', 'exit_code_for', 'parse_config', 'run', 'serialize_config']
