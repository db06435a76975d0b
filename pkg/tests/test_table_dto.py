"""Unit tests for CSV table formatting."""
import os
import sys
import unittest

from parameterized import parameterized
from pydantic import ValidationError

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from disjoint.dto.table_dto import Table, format_cell


class TestFormatCell(unittest.TestCase):
    """Test cases for format_cell."""

    @parameterized.expand([
        ("float", 3.0, "3.000000000000e+00"),
        ("small_float", -1.25e-7, "-1.250000000000e-07"),
        ("nan", float("nan"), "nan"),
        ("int", 42, "42"),
        ("true", True, "1"),
        ("false", False, "0"),
        ("text", "delta1d_even", "delta1d_even"),
        ("pipe", "1 0|0 1", "1 0|0 1"),
        ("separator", "a,b", '"a,b"'),
        ("quote", 'say "hi"', '"say ""hi"""'),
    ])
    def test_format_cell(self, name, value, expected):
        """Test the text of one cell."""
        self.assertEqual(format_cell(value), expected)


class TestTable(unittest.TestCase):
    """Test cases for Table."""

    def test_to_csv(self):
        """Test the header, LF endings and the trailing newline."""
        table = Table(columns=["mode", "frequency", "is_cm"], rows=[[0, 1.0, True], [1, 2.5, False]])
        self.assertEqual(table.to_csv(),
                         "mode,frequency,is_cm\n0,1.000000000000e+00,1\n1,2.500000000000e+00,0\n")

    def test_empty_table(self):
        """Test that a table without rows is just its header."""
        self.assertEqual(Table(name="threshold", columns=["n_layers"]).to_csv(), "n_layers\n")

    def test_column(self):
        """Test column lookup by name."""
        table = Table(columns=["check", "passed"], rows=[["a", True], ["b", False]])
        self.assertEqual(table.column("passed"), [True, False])

    def test_row_width(self):
        """Test that rows must match the header."""
        with self.assertRaises(ValidationError):
            Table(columns=["a", "b"], rows=[[1]])


if __name__ == "__main__":
    unittest.main(verbosity=2)
