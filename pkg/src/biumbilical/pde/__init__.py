"""Residual evaluators and solvers for the l- and r-systems."""
from .constructive import ConstructiveResult, StepCountError, solve_r_constructive
from .fit import fit_r_family
from .gauss_newton import ConvergenceError, GaussNewtonReport, LSolution, smooth_perturbation, solve_l_gauss_newton
from .linear import RankDeficientError, ScalarGridSolution, solve_r_grid
from .residuals import (
    HouseholderPair,
    LSystemResidual,
    char_det,
    char_poly,
    householder_form,
    householder_pair,
    metric_from_l,
    reflection_char_poly,
    residual_l_system,
    residual_r_system,
    quartic_char_poly,
)
from .sphere_fit import FitAmbiguousError, FitResult, verify_sphere_theorem

__all__ = [
    "ConstructiveResult",
    "ConvergenceError",
    "FitAmbiguousError",
    "FitResult",
    "GaussNewtonReport",
    "HouseholderPair",
    "LSolution",
    "LSystemResidual",
    "RankDeficientError",
    "ScalarGridSolution",
    "StepCountError",
    "char_det",
    "char_poly",
    "fit_r_family",
    "householder_form",
    "householder_pair",
    "metric_from_l",
    "reflection_char_poly",
    "residual_l_system",
    "residual_r_system",
    "smooth_perturbation",
    "solve_l_gauss_newton",
    "solve_r_constructive",
    "solve_r_grid",
    "quartic_char_poly",
    "verify_sphere_theorem",
]
