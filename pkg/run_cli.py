#!/usr/bin/env python3
"""Run the batch CLI."""
import sys

from disjoint.main import main

if __name__ == "__main__":
    sys.exit(main())
