"""Bundled .econ fixtures."""
