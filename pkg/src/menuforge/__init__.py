"""Exact menus of learning algorithms in repeated bimatrix games."""

__version__ = "0.1.0"
