"""Configuration management for the layered-spectrum toolkit."""
import os
from dataclasses import dataclass
from typing import Optional
from dotenv import load_dotenv

load_dotenv()


@dataclass
class LoggingConfig:
    """Configuration for log output."""
    level: str = "INFO"
    file: Optional[str] = None


class Config:
    """Main configuration class."""

    def __init__(self):
        self.logging = LoggingConfig(
            level=os.getenv('DISJOINT_LOG_LEVEL', 'INFO').upper(),
            file=os.getenv('DISJOINT_LOG_FILE') or None,
        )
        self.raw_threads = os.getenv('DISJOINT_THREADS', '0')
        self.raw_seed = os.getenv('DISJOINT_SEED', '20130701')
        self.raw_grid_step = os.getenv('DISJOINT_GRID_STEP', '0.02')
        self.raw_grid_length = os.getenv('DISJOINT_GRID_LENGTH', '12')
        self.output_dir = os.getenv('DISJOINT_OUTPUT_DIR', '.')

    @property
    def threads(self) -> int:
        """Worker threads for sweeps (0 = one per CPU)."""
        return int(self.raw_threads)

    @property
    def seed(self) -> int:
        """Seed of the random verification suites."""
        return int(self.raw_seed)

    @property
    def grid_step(self) -> float:
        return float(self.raw_grid_step)

    @property
    def grid_length(self) -> float:
        return float(self.raw_grid_length)

    def validate(self) -> list[str]:
        """Validate configuration and return list of errors."""
        errors = []

        if self.logging.level not in ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'):
            errors.append(f"DISJOINT_LOG_LEVEL must be a logging level name, got {self.logging.level}")

        try:
            if self.threads < 0:
                errors.append("DISJOINT_THREADS must be >= 0")
        except ValueError:
            errors.append(f"DISJOINT_THREADS must be an integer, got {self.raw_threads!r}")

        try:
            if self.seed < 0:
                errors.append("DISJOINT_SEED must be >= 0")
        except ValueError:
            errors.append(f"DISJOINT_SEED must be an integer, got {self.raw_seed!r}")

        try:
            if not self.grid_step > 0.0:
                errors.append("DISJOINT_GRID_STEP must be positive")
        except ValueError:
            errors.append(f"DISJOINT_GRID_STEP must be a number, got {self.raw_grid_step!r}")

        try:
            if self.grid_length < 10.0:
                errors.append("DISJOINT_GRID_LENGTH must be at least 10")
        except ValueError:
            errors.append(f"DISJOINT_GRID_LENGTH must be a number, got {self.raw_grid_length!r}")

        return errors


config = Config()
