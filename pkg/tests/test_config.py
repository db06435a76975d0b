"""Unit tests for environment configuration."""
import os
import sys
import unittest
from unittest.mock import patch

from parameterized import parameterized

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from config import Config


class TestConfig(unittest.TestCase):
    """Test cases for Config."""

    def test_defaults(self):
        """Test values with no environment overrides."""
        with patch.dict(os.environ, {}, clear=True):
            settings = Config()
        self.assertEqual(settings.logging.level, "INFO")
        self.assertIsNone(settings.logging.file)
        self.assertEqual(settings.threads, 0)
        self.assertEqual(settings.seed, 20130701)
        self.assertEqual(settings.grid_step, 0.02)
        self.assertEqual(settings.grid_length, 12.0)
        self.assertEqual(settings.output_dir, ".")
        self.assertEqual(settings.validate(), [])

    def test_overrides(self):
        """Test values read from the environment."""
        env = {"DISJOINT_LOG_LEVEL": "debug", "DISJOINT_THREADS": "4", "DISJOINT_SEED": "9",
               "DISJOINT_OUTPUT_DIR": "runs"}
        with patch.dict(os.environ, env, clear=True):
            settings = Config()
        self.assertEqual(settings.logging.level, "DEBUG")
        self.assertEqual(settings.threads, 4)
        self.assertEqual(settings.seed, 9)
        self.assertEqual(settings.output_dir, "runs")
        self.assertEqual(settings.validate(), [])

    @parameterized.expand([
        ("log_level", "DISJOINT_LOG_LEVEL", "LOUD", "DISJOINT_LOG_LEVEL"),
        ("negative_threads", "DISJOINT_THREADS", "-1", "DISJOINT_THREADS must be >= 0"),
        ("text_threads", "DISJOINT_THREADS", "all", "DISJOINT_THREADS must be an integer"),
        ("negative_seed", "DISJOINT_SEED", "-5", "DISJOINT_SEED must be >= 0"),
        ("zero_step", "DISJOINT_GRID_STEP", "0", "DISJOINT_GRID_STEP must be positive"),
        ("text_step", "DISJOINT_GRID_STEP", "fine", "DISJOINT_GRID_STEP must be a number"),
        ("short_box", "DISJOINT_GRID_LENGTH", "6", "DISJOINT_GRID_LENGTH must be at least 10"),
    ])
    def test_validate(self, name, variable, value, fragment):
        """Test that one bad variable gives one problem naming it."""
        with patch.dict(os.environ, {variable: value}, clear=True):
            problems = Config().validate()
        self.assertEqual(len(problems), 1)
        self.assertIn(fragment, problems[0])


if __name__ == "__main__":
    unittest.main(verbosity=2)
