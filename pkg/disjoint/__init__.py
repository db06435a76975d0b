"""Exact spectra of layered 2N-particle systems split into N disjoint groups."""
