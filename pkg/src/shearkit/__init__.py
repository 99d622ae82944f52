"""Hyperbolic strips, shear coordinates, train tracks, and convex length functionals."""

__version__ = "0.1.0"
