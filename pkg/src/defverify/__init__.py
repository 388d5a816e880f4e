"""Exact verification kernel for deformation counterexamples in characteristic p."""

__version__ = "0.1.0"
