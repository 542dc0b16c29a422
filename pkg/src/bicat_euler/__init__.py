"""Exact Euler characteristics of finite categories, cat-graphs and bicategories."""

__version__ = "0.1.0"
