"""Scenario configuration, verification reports, mesh export and the command-line entry point."""
from .commands import (
    cmd_char_poly,
    cmd_check_semisymmetry,
    cmd_mesh,
    cmd_solve_l,
    cmd_solve_r,
    cmd_solve_r_constructive,
    cmd_verify_closed_form,
)
from .config import ConfigError, Scenario, load_scenario, make_scenario
from .mesh import Mesh, MeshError, build_mesh, projection_matrix, validate_obj
from .report import Record, Report, dumps, format_float

__all__ = [
    "ConfigError",
    "Mesh",
    "MeshError",
    "Record",
    "Report",
    "Scenario",
    "build_mesh",
    "cmd_char_poly",
    "cmd_check_semisymmetry",
    "cmd_mesh",
    "cmd_solve_l",
    "cmd_solve_r",
    "cmd_solve_r_constructive",
    "cmd_verify_closed_form",
    "dumps",
    "format_float",
    "load_scenario",
    "make_scenario",
    "projection_matrix",
    "validate_obj",
]
