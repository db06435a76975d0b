"""Tests for the layered-spectrum toolkit."""
