"""Unit tests for spec-file parsing and normalized serialization."""
import os
import sys
import unittest

from parameterized import parameterized

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from disjoint.commands.config_file import parse_config, serialize_config
from disjoint.core.errors import ConfigError
from disjoint.core.model import IntraPotential, default_chain

PRESET = """
# two-layer chain
preset = paper-default
dimension = 1
layers = 2
"""

MIXED = """
dimension = 2
layers = 3
intra = inverse_square
g = 1.5

[layer.2]
occupancy = 1
intra = none

[layer.3]
intra = delta
scattering_ratio = 0.5
mass = 2.0

[coupling]
omega2.1.2 = 4.0
omega2.2.3 = 2.5

[shift]
e = 1.0
e.1.2 = 3.0

[run]
count = 4
strengths = 0.0, 1.0, 2.5
axis = g
start = 0
stop = 2
num = 5
"""


class TestParseConfig(unittest.TestCase):
    """Test cases for parse_config."""

    def test_preset(self):
        """Test that the preset fills the nearest-neighbor coupling."""
        parsed = parse_config(PRESET)
        self.assertEqual(parsed.spec, default_chain(2))
        self.assertEqual(parsed.shifts.default, 0.0)
        self.assertEqual(parsed.run.count, 10)

    def test_layer_defaults_and_overrides(self):
        """Test top-level layer defaults, per-layer overrides and 0-based pairs."""
        parsed = parse_config(MIXED)
        spec = parsed.spec
        self.assertEqual(spec.dimension, 2)
        self.assertEqual(spec.layers[0].intra, IntraPotential.inverse_square(1.5))
        self.assertEqual(spec.layers[1].occupancy, 1)
        self.assertEqual(spec.layers[2].intra, IntraPotential.delta(scattering_ratio=0.5))
        self.assertEqual(spec.layers[2].mass, 2.0)
        self.assertEqual(spec.interlayer_omega2[0][1], 4.0)
        self.assertEqual(spec.interlayer_omega2[1][2], 2.5)
        self.assertEqual(spec.interlayer_omega2[0][2], 0.0)
        self.assertEqual(parsed.shifts.e(0, 1), 3.0)
        self.assertEqual(parsed.shifts.e(1, 2), 1.0)
        self.assertEqual(parsed.run.strengths, [0.0, 1.0, 2.5])
        self.assertEqual(parsed.run.axis, "g")

    def test_four_frequency_bonds(self):
        """Test that distinct bond frequencies are accepted and collapsed to their mean."""
        parsed = parse_config("layers = 2\n[coupling]\nbonds.2.1 = 1, 4, 4, 1\n")
        self.assertEqual(parsed.spec.bond_values(0, 1), (1.0, 4.0, 4.0, 1.0))
        self.assertEqual(parsed.spec.interlayer_omega2[0][1], 2.5)

    def test_negative_frequency_names_key(self):
        """Test that a negative squared frequency reports its key and line."""
        with self.assertRaises(ConfigError) as context:
            parse_config("layers = 2\n[coupling]\nomega2.1.2 = -1.0\n")
        self.assertEqual(context.exception.key, "omega2.1.2")
        self.assertEqual(context.exception.line, 3)
        self.assertIn("omega2.1.2", str(context.exception))

    def test_units_mismatch(self):
        """Test that frequencies in other units are refused."""
        with self.assertRaises(ConfigError) as context:
            parse_config("layers = 2\nomega0_units = hz\n")
        self.assertIn("units mismatch", str(context.exception))
        self.assertEqual(context.exception.key, "omega0_units")

    @parameterized.expand([
        ("unknown_key", "layers = 2\ncolour = red\n", "colour"),
        ("unknown_run_key", "layers = 2\n[run]\nspeed = 3\n", "speed"),
        ("unknown_coupling_key", "layers = 2\n[coupling]\nomega.1.2 = 1\n", "omega.1.2"),
        ("bad_number", "layers = two\n", "layers"),
        ("duplicate_key", "layers = 2\nlayers = 3\n", "layers"),
        ("negative_binding", "layers = 2\n[shift]\ne = -1\n", "e"),
        ("self_pair", "layers = 2\n[coupling]\nomega2.1.1 = 1\n", "omega2.1.1"),
        ("pair_out_of_range", "layers = 2\n[coupling]\nomega2.1.3 = 1\n", "omega2.1.3"),
        ("pair_twice", "layers = 2\n[coupling]\nomega2.1.2 = 1\nbonds.1.2 = 1, 1, 1, 1\n", "bonds.1.2"),
    ])
    def test_rejected_keys(self, name, text, key):
        """Test errors that name the offending key."""
        with self.assertRaises(ConfigError) as context:
            parse_config(text)
        self.assertEqual(context.exception.key, key)

    @parameterized.expand([
        ("missing_equals", "layers = 2\njust words\n", 2),
        ("unknown_section", "layers = 2\n[physics]\n", 2),
        ("layer_without_index", "layers = 2\n[layer]\n", 2),
        ("duplicate_section", "layers = 2\n[run]\n[run]\n", 3),
        ("layer_out_of_range", "layers = 2\n[layer.3]\nmass = 1\n", 2),
    ])
    def test_rejected_lines(self, name, text, line):
        """Test errors that carry the offending line number."""
        with self.assertRaises(ConfigError) as context:
            parse_config(text)
        self.assertEqual(context.exception.line, line)

    def test_missing_layer_count(self):
        """Test that the number of layers is required."""
        with self.assertRaises(ConfigError) as context:
            parse_config("dimension = 1\n")
        self.assertEqual(context.exception.key, "layers")

    def test_run_range_check(self):
        """Test the cross-field checks of the run section."""
        with self.assertRaises(ConfigError):
            parse_config("layers = 2\n[run]\nn_min = 10\nn_max = 5\n")
        with self.assertRaises(ConfigError):
            parse_config("layers = 2\n[run]\naxis = g\n")

    def test_invalid_system_is_config_error(self):
        """Test that a physics-level rejection surfaces as a configuration problem."""
        with self.assertRaises(ConfigError) as context:
            parse_config("layers = 2\n[layer.1]\noccupancy = 1\nintra = inverse_square\ng = 1\n")
        self.assertIn("invalid system", str(context.exception))

    def test_wrong_bond_count(self):
        """Test the bond count of a double-double pair."""
        with self.assertRaises(ConfigError):
            parse_config("layers = 2\n[coupling]\nbonds.1.2 = 1, 2\n")


class TestSerializeConfig(unittest.TestCase):
    """Test cases for serialize_config."""

    @parameterized.expand([
        ("preset", PRESET),
        ("mixed", MIXED),
        ("bonds", "layers = 2\n[coupling]\nbonds.1.2 = 1, 4, 4, 1\n"),
    ])
    def test_parse_serialize_idempotent(self, name, text):
        """Test that normalized text parses back to the same objects and text."""
        parsed = parse_config(text)
        first = serialize_config(parsed.spec, parsed.shifts, parsed.run)
        reparsed = parse_config(first)
        self.assertEqual(reparsed.spec, parsed.spec)
        self.assertEqual(reparsed.shifts, parsed.shifts)
        self.assertEqual(reparsed.run, parsed.run)
        self.assertEqual(serialize_config(reparsed.spec, reparsed.shifts, reparsed.run), first)

    def test_normalized_text(self):
        """Test explicit layer sections and no preset."""
        parsed = parse_config(PRESET)
        text = serialize_config(parsed.spec, parsed.shifts)
        self.assertNotIn("preset", text)
        self.assertIn("[layer.2]", text)
        self.assertIn("omega2.1.2 = 9.0", text)
        self.assertIn("e = 0.0", text)
        self.assertNotIn("[run]", text)
        self.assertTrue(text.endswith("\n"))


if __name__ == "__main__":
    unittest.main(verbosity=2)
