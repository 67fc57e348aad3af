"""Bi-umbilical foliated semi-symmetric hypersurfaces of Euclidean 4-space.

Closed-form solution families, Taylor-jet geometry, the envelope construction
with its shape operator and curvature, grid solvers for the defining PDE
systems, and a reporting command line.
"""
from . import closed_forms, curvature, envelope, geom_kernel, grid, jets, pde
from .closed_forms import SolutionParams

__version__ = "0.1.0"

__all__ = ["SolutionParams", "closed_forms", "curvature", "envelope", "geom_kernel", "grid", "jets", "pde"]
