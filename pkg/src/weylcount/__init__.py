"""Exact Weyl counting for products of spheres and tori."""

__version__ = "0.1.0"
